"""Command-line entry point: ``groupdet <subcommand> <action> [flags]``.

Every run prints one JSON document ``{"config": ..., "result": ...}`` with
sorted keys. Exit status is 0 on success, 2 on a domain error and 1 on bad
usage. Rationals are written as {"num", "den"} strings, complex numbers as
{"re", "im"}.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import afrob, detfact, efun, frobgroup, pde
from .characters import (
    abelian_characters,
    character_matrix_determinant,
    character_table_numeric,
    load_character_table,
)
from .cyclotomic import CyclotomicNumber
from .errors import GroupDetError, InvalidArgument, UsageError
from .group import conjugacy_classes, resolve_group
from .poly import SparsePoly

DEFAULT_SEED = 42


# -- encoding -------------------------------------------------------------------------


def encode(obj):
    """Map results onto plain JSON types deterministically."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, Fraction):
        return {"num": str(obj.numerator), "den": str(obj.denominator)}
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else repr(v)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": encode(float(obj.real)), "im": encode(float(obj.imag))}
    if isinstance(obj, CyclotomicNumber):
        if obj.is_rational():
            return encode(Fraction(obj.rational_value()))
        return obj.to_json()
    if isinstance(obj, SparsePoly):
        return obj.to_json()
    if isinstance(obj, np.ndarray):
        return [encode(v) for v in obj.tolist()]
    if isinstance(obj, dict):
        return {str(k): encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(v) for v in obj]
    if hasattr(obj, "to_json"):
        return encode(obj.to_json())
    if dataclasses.is_dataclass(obj):
        return {f.name: encode(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    raise TypeError(f"cannot encode {type(obj).__name__}")


# -- argument parsing helpers -------------------------------------------------------------


def parse_number(text: str):
    """'3', '-1/2' -> Fraction; '0.25' -> Fraction of the decimal; '1+2j' -> complex."""
    text = text.strip()
    try:
        return Fraction(text)
    except ValueError:
        pass
    try:
        return complex(text.replace("i", "j"))
    except ValueError:
        raise InvalidArgument(f"cannot read {text!r} as a number") from None


def parse_vector(text: str | None, name: str) -> list:
    if text is None:
        raise UsageError(f"--{name} is required")
    return [parse_number(t) for t in text.split(",") if t.strip()]


def floats(v: Sequence) -> list[float]:
    out = []
    for x in v:
        if isinstance(x, complex):
            raise InvalidArgument(f"expected a real number, got {x}")
        out.append(float(x))
    return out


def _exact_or_complex(v: list) -> list:
    if any(isinstance(x, complex) for x in v):
        return [complex(x) for x in v]
    return [x.numerator if x.denominator == 1 else x for x in v]


def _group(args):
    if not args.group:
        raise UsageError("--group is required")
    return resolve_group(args.group)


def _require(args, name: str):
    v = getattr(args, name)
    if v is None:
        raise UsageError(f"--{name.replace('_', '-')} is required")
    return v


# -- handlers -------------------------------------------------------------------------------


def group_info(args):
    G = _group(args)
    cc = conjugacy_classes(G)
    return {
        "n": G.n,
        "names": list(G.names),
        "abelian": G.is_abelian,
        "exponent": G.exponent,
        "classes": [list(c) for c in cc.classes],
    }


def group_characters(args):
    G = _group(args)
    if args.table:
        table = load_character_table(G, args.table)
    elif G.is_abelian:
        table = abelian_characters(G, seed=args.seed)
    else:
        table = character_table_numeric(G, seed=args.seed)
    return {
        "table": table.to_json(),
        "orthogonality_defect": table.orthogonality_defect(),
        "determinant": character_matrix_determinant(table),
    }


def det_expand(args):
    G = _group(args)
    theta = detfact.expand_group_det(G)
    return {"polynomial": theta, "terms": len(theta.terms), "degree": theta.degree()}


def det_eval(args):
    G = _group(args)
    a = _exact_or_complex(parse_vector(args.coeffs, "coeffs"))
    return {"det": detfact.FrobeniusMatrix(G, tuple(a)).det()}


def det_circulant(args):
    c = [complex(x) for x in parse_vector(args.coeffs, "coeffs")]
    return {"value": detfact.circulant_eval(c)}


def factor_dedekind(args):
    G = _group(args)
    res = detfact.dedekind_factorization(G)
    return {"forms": [list(f.coeffs) for f in res.forms], "verified": res.verified, "product": res.product}


def factor_s3(args):
    x = _exact_or_complex(parse_vector(args.coeffs, "coeffs"))
    if len(x) != 6:
        raise InvalidArgument("the S3 factors need 6 coefficients")
    p1, p2, p3 = detfact.s3_phi_eval(x)
    return {"phi1": p1, "phi2": p2, "phi3": p3, "product": p1 * p2 * p3 * p3}


def blocks_dets(args):
    G = _group(args)
    a = [complex(x) for x in parse_vector(args.coeffs, "coeffs")]
    blocks = detfact.isotypic_block_dets(G, a)
    return {"blocks": [{"degree": b.degree, "size": b.size, "det": b.det} for b in blocks]}


def pde_symbol(args):
    G = _group(args)
    spec = pde.operator_spec(G)
    return {
        "order": spec.order,
        "symbol": spec.symbol,
        "factors": None if spec.factors is None else [list(f.coeffs) for f in spec.factors],
        "factors_consistent": spec.factors_consistent(),
    }


def pde_plane_wave(args):
    G = _group(args)
    alpha = _exact_or_complex(parse_vector(args.alpha, "alpha"))
    point = floats(parse_vector(args.point, "point")) if args.point else None
    chk = pde.plane_wave_check(G, alpha, args.func or "exp", point=point, h=args.step)
    return {"value": chk.residual, "exact": chk.exact, "theta_at_alpha": complex(chk.theta_at_alpha), "step": chk.step}


def pde_fd_order(args):
    G = _group(args)
    alpha = [complex(x) for x in parse_vector(args.alpha, "alpha")]
    return {"observed_order": pde.plane_wave_fd_order(G, alpha, args.func or "exp", h=args.step or 0.1)}


def pde_separated(args):
    G = _group(args)
    funcs = [f.strip() for f in _require(args, "funcs").split(",")]
    point = floats(parse_vector(args.point, "point")) if args.point else None
    chk = pde.separated_solution_residual(G, funcs, point=point, h=args.step)
    return {"value": chk.residual, "step": chk.step}


def pde_cayley(args):
    f = _require(args, "f")
    q = pde.matrix_det_poly(f) ** (args.power if args.power is not None else 1)
    out = pde.cayley_omega_apply(q, f)
    det = pde.matrix_det_poly(f)
    ratio = None
    k = args.power if args.power is not None else 1
    if k >= 1:
        # Omega det^k = k (k+1) ... (k+f-1) det^(k-1)
        c = math.prod(range(k, k + f))
        ratio = out == det ** (k - 1) * c
    return {"result": out, "matches_capelli_constant": ratio}


def pde_polarization(args):
    f = _require(args, "f")
    q = pde.matrix_det_poly(f)
    chk = pde.polarization_commutator_check(f, _require(args, "j"), _require(args, "l"), args.r or 1, q)
    return {"ok": chk.ok, "witness": chk.witness}


def pde_omega9(args):
    point = floats(parse_vector(args.point, "point")) if args.point else pde.DEFAULT_OMEGA9_POINT
    res = pde.omega9_kernel_residual(args.func or "gauss", point, h=args.step or 0.02)
    return {"value": res.residual, "phi": res.value, "largest_term": res.largest_term}


def _john_params(args):
    lam = floats(parse_vector(args.lam, "lam"))
    alpha = floats(parse_vector(args.alpha, "alpha"))
    beta = floats(parse_vector(args.beta, "beta"))
    return lam, alpha, beta


def john_transform(args):
    lam, alpha, beta = _john_params(args)
    q = pde.john_transform_numeric(lam, alpha, beta, enforce_domain=not args.no_domain_check)
    return {"value": q.value, "error_estimate": q.error_estimate}


def john_closed(args):
    lam, alpha, beta = _john_params(args)
    return {"value": pde.john_hypergeometric_closed(lam, alpha, beta)}


def john_compare(args):
    rows = []
    for lam, alpha, beta in pde.admissible_john_parameters(args.count or 25, seed=args.seed):
        q = pde.john_transform_numeric(lam, alpha, beta)
        c = pde.john_hypergeometric_closed(lam, alpha, beta)
        rows.append({"lam": lam, "alpha": alpha, "beta": beta, "numeric": q.value, "closed": c,
                     "error_estimate": q.error_estimate, "ok": abs(q.value - c) <= max(1e-6, 10 * q.error_estimate)})
    return {"cases": rows, "all_ok": all(r["ok"] for r in rows)}


def _n(args) -> int:
    return _require(args, "n")


def _nu(args) -> Fraction:
    if args.nu is None:
        return Fraction(0)
    v = parse_number(args.nu)
    if isinstance(v, complex):
        raise InvalidArgument("nu must be rational")
    return v


def efun_falling(args):
    return {"s": efun.falling_factorial_coeffs(_n(args))}


def efun_hilbert(args):
    A, C = efun.hilbert_c_coeffs(_n(args))
    return {"A": A, "C": C}


def efun_sigma(args):
    return {"sigma": efun.sigma_coeffs(_n(args))}


def efun_ode_coeffs(args):
    return efun.ode_coeffs(_n(args)).to_json()


def efun_eval(args):
    kind = args.kind or "L"
    if kind == "F_n":
        x = floats(parse_vector(args.x, "x"))
    else:
        x = parse_number(_require(args, "x"))
        x = complex(x) if isinstance(x, complex) else float(x)
    v = efun.series_eval(kind, x, _n(args), _nu(args), args.p or 0, args.terms if args.terms is not None else 40)
    return {"value": v.value, "tail_bound": v.tail_bound, "first_omitted": v.first_omitted,
            "coefficients": list(v.series.coeffs[: min(len(v.series.coeffs), 8)])}


def efun_residual(args):
    xs = floats(parse_vector(args.x, "x")) if args.x else list(np.linspace(0.1, 2.0, 20))
    r = efun.ode_residual(_n(args), _nu(args), xs, args.terms if args.terms is not None else 30, args.p or 0)
    return {"max_residual": r.max_residual, "points": list(r.points), "residuals": list(r.residuals)}


def efun_denominators(args):
    return efun.efun_denominator_bound(_n(args), _nu(args), args.terms if args.terms is not None else 60).to_json()


def efun_bracket(args):
    x0 = floats(parse_vector(args.base, "base"))
    x = floats(parse_vector(args.x, "x"))
    return {"value": efun.bracket_apply(_require(args, "func"), x0, _require(args, "r"), x)}


def efun_solve(args):
    n = _n(args)
    base = floats(parse_vector(args.base, "base")) if args.base else [0.0] * n
    phis = [p.strip() for p in (args.phi or ",".join(["one"] * n)).split(",")]
    data = efun.BoundaryData(tuple(base), tuple(phis))
    sol = efun.eigen_solve(n, args.rhs or "zero", data, seed=args.seed)
    return {
        "bc_error": sol.bc_error,
        "pde_residual": sol.pde_residual,
        "passed": sol.passed,
        "grid_points": len(sol.points),
        "sample": [{"x": list(p), "u": float(u)} for p, u in zip(sol.points[:: max(1, len(sol.points) // 8)], sol.values[:: max(1, len(sol.points) // 8)])],
    }


def liealg_summary(args):
    G = _group(args)
    L = frobgroup.center_derived_dims(G)
    b = frobgroup.bracket_identity_check(G)
    u = frobgroup.unit_dims_check(G)
    return {
        "r": L.r,
        "derived_dim": L.derived_dim,
        "direct_sum": L.direct_sum,
        "bracket_ok": b.ok,
        "matrix_commutator_ok": b.matrix_commutator_ok,
        "degrees": list(u.degrees),
        "unit_dims_ok": u.ok,
    }


def liealg_generators(args):
    G = _group(args)
    return {"matrices": [m for m in frobgroup.lie_generators(G).matrices]}


def liealg_convolve(args):
    G = _group(args)
    a = _exact_or_complex(parse_vector(args.a, "a"))
    b = _exact_or_complex(parse_vector(args.b, "b"))
    return {"c": frobgroup.convolve(G, a, b)}


def liealg_inverse(args):
    G = _group(args)
    a = _exact_or_complex(parse_vector(args.a, "a"))
    U = frobgroup.frobenius_inverse(G, a)
    return {"inverse": U, "defect": frobgroup.inverse_defect(G, a, U)}


def afrob_check(args):
    return afrob.certificate(_n(args), seed=args.seed)


def afrob_product(args):
    z = floats(parse_vector(args.z, "z"))
    X = floats(parse_vector(args.X, "X"))
    Y = floats(parse_vector(args.Y, "Y"))
    return {"product": afrob.frob_product(np.array(z), np.array(X), np.array(Y))}


def afrob_potential(args):
    z = floats(parse_vector(args.z, "z"))
    rep = afrob.potential_check(z)
    return {"max_deviation": rep.max_deviation, "worst": list(rep.worst), "ok": rep.ok}


def afrob_structure(args):
    z = [Fraction(x) if not isinstance(x, complex) else x for x in parse_vector(args.z, "z")]
    return afrob.structure_checks(z, seed=args.seed).to_json()


# (subcommand, action) -> (handler, extra flags)
COMMANDS: dict[tuple[str, str], tuple[Callable, tuple[str, ...]]] = {
    ("group", "info"): (group_info, ()),
    ("group", "characters"): (group_characters, ("table",)),
    ("det", "expand"): (det_expand, ()),
    ("det", "eval"): (det_eval, ("coeffs",)),
    ("det", "circulant"): (det_circulant, ("coeffs",)),
    ("factor", "dedekind"): (factor_dedekind, ()),
    ("factor", "s3"): (factor_s3, ("coeffs",)),
    ("blocks", "dets"): (blocks_dets, ("coeffs",)),
    ("pde", "symbol"): (pde_symbol, ()),
    ("pde", "plane-wave"): (pde_plane_wave, ("alpha", "func", "point", "step")),
    ("pde", "fd-order"): (pde_fd_order, ("alpha", "func", "step")),
    ("pde", "separated"): (pde_separated, ("funcs", "point", "step")),
    ("pde", "cayley"): (pde_cayley, ("f", "power")),
    ("pde", "polarization"): (pde_polarization, ("f", "j", "l", "r")),
    ("pde", "omega9"): (pde_omega9, ("func", "point", "step")),
    ("john", "transform"): (john_transform, ("lam", "alpha", "beta", "no_domain_check")),
    ("john", "closed"): (john_closed, ("lam", "alpha", "beta")),
    ("john", "compare"): (john_compare, ("count",)),
    ("efun", "falling"): (efun_falling, ()),
    ("efun", "hilbert"): (efun_hilbert, ()),
    ("efun", "sigma"): (efun_sigma, ()),
    ("efun", "ode-coeffs"): (efun_ode_coeffs, ()),
    ("efun", "eval"): (efun_eval, ("kind", "x", "p")),
    ("efun", "residual"): (efun_residual, ("x", "p")),
    ("efun", "denominators"): (efun_denominators, ()),
    ("efun", "bracket"): (efun_bracket, ("func", "base", "r", "x")),
    ("efun", "solve"): (efun_solve, ("rhs", "phi", "base")),
    ("liealg", "summary"): (liealg_summary, ()),
    ("liealg", "generators"): (liealg_generators, ()),
    ("liealg", "convolve"): (liealg_convolve, ("a", "b")),
    ("liealg", "inverse"): (liealg_inverse, ("a",)),
    ("afrob", "check"): (afrob_check, ()),
    ("afrob", "product"): (afrob_product, ("z", "X", "Y")),
    ("afrob", "potential"): (afrob_potential, ("z",)),
    ("afrob", "structure"): (afrob_structure, ("z",)),
}

# `frobgroup liealg` is accepted as a spelling of `liealg summary`
ALIASES = {("frobgroup", "liealg"): ("liealg", "summary")}

# library operation -> command that exercises it
OPERATIONS: dict[str, str] = {
    "group.parse_group": "group info",
    "group.conjugacy_classes": "group info",
    "characters.abelian_characters": "group characters",
    "characters.character_table_numeric": "group characters",
    "detfact.expand_group_det": "det expand",
    "detfact.dedekind_factorization": "factor dedekind",
    "detfact.circulant_eval": "det circulant",
    "detfact.isotypic_block_dets": "blocks dets",
    "detfact.s3_phi_eval": "factor s3",
    "pde.plane_wave_check": "pde plane-wave",
    "pde.separated_solution_residual": "pde separated",
    "pde.cayley_omega_apply": "pde cayley",
    "pde.polarization_commutator_check": "pde polarization",
    "pde.john_transform_numeric": "john transform",
    "pde.john_hypergeometric_closed": "john closed",
    "pde.omega9_kernel_residual": "pde omega9",
    "efun.falling_factorial_coeffs": "efun falling",
    "efun.hilbert_c_coeffs": "efun hilbert",
    "efun.sigma_coeffs": "efun sigma",
    "efun.ode_coeffs": "efun ode-coeffs",
    "efun.series_eval": "efun eval",
    "efun.ode_residual": "efun residual",
    "efun.efun_denominator_bound": "efun denominators",
    "efun.bracket_apply": "efun bracket",
    "efun.eigen_solve": "efun solve",
    "frobgroup.convolve": "liealg convolve",
    "frobgroup.frobenius_inverse": "liealg inverse",
    "frobgroup.lie_generators": "liealg generators",
    "frobgroup.bracket_identity_check": "liealg summary",
    "frobgroup.center_derived_dims": "liealg summary",
    "frobgroup.unit_dims_check": "liealg summary",
    "afrob.frob_product": "afrob product",
    "afrob.structure_checks": "afrob structure",
    "afrob.potential_check": "afrob potential",
}

_FLAG_SPECS: dict[str, dict] = {
    "table": {"help": "character-table JSON file"},
    "coeffs": {"help": "comma-separated coefficients (p/q, decimals or complex)"},
    "alpha": {"help": "comma-separated vector"},
    "beta": {"help": "comma-separated vector"},
    "lam": {"help": "comma-separated exponents"},
    "func": {"help": "built-in function id"},
    "funcs": {"help": "comma-separated function ids"},
    "point": {"help": "comma-separated evaluation point"},
    "step": {"type": float, "help": "finite-difference step"},
    "f": {"type": int, "help": "matrix size"},
    "power": {"type": int, "help": "power of the determinant"},
    "j": {"type": int}, "l": {"type": int}, "r": {"type": int},
    "count": {"type": int},
    "no_domain_check": {"action": "store_true", "help": "allow exponents outside the convergence domain"},
    "kind": {"choices": list(efun.SERIES_KINDS)},
    "x": {"help": "evaluation point(s), comma-separated"},
    "p": {"type": int, "help": "index of the exponent"},
    "base": {"help": "base point, comma-separated"},
    "rhs": {"help": "right-hand side id"},
    "phi": {"help": "comma-separated boundary function ids"},
    "a": {"help": "comma-separated vector"},
    "b": {"help": "comma-separated vector"},
    "z": {"help": "point, comma-separated"},
    "X": {"help": "tangent vector"},
    "Y": {"help": "tangent vector"},
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--group", help="group JSON file or bundled name (z2, z3, z4, z6, klein, s3, d4, q8)")
    p.add_argument("--n", type=int)
    p.add_argument("--nu", help="rational parameter p/q")
    p.add_argument("--terms", type=int, help="series truncation")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--threads", type=int, default=1, help="worker cap (computations here are serial)")
    p.add_argument("--out", help="write JSON here instead of stdout")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="groupdet", description=__doc__.splitlines()[0])
    subs = parser.add_subparsers(dest="command", parser_class=_Parser)
    common = _common()
    actions: dict[str, argparse._SubParsersAction] = {}
    for (cmd, act), (_, extras) in list(COMMANDS.items()) + [
        (k, (None, COMMANDS[v][1])) for k, v in ALIASES.items()
    ]:
        if cmd not in actions:
            actions[cmd] = subs.add_parser(cmd).add_subparsers(dest="action", parser_class=_Parser)
        ap = actions[cmd].add_parser(act, parents=[common])
        for name in extras:
            ap.add_argument(f"--{name.replace('_', '-')}", dest=name, **_FLAG_SPECS[name])
    return parser


def _config(args) -> dict:
    cfg = {k: v for k, v in vars(args).items() if v is not None and v is not False}
    return dict(sorted(cfg.items()))


def _glue_negative_values(argv: Sequence[str]) -> list[str]:
    """'--alpha -1,-2' -> '--alpha=-1,-2'; argparse would read the value as a flag."""
    out: list[str] = []
    for tok in argv:
        if out and out[-1].startswith("--") and "=" not in out[-1] and len(tok) > 1 and tok[0] == "-" and (tok[1].isdigit() or tok[1] == "."):
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def run(argv: Sequence[str] | None = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    args = None
    argv = _glue_negative_values(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(argv)
        if not args.command or not getattr(args, "action", None):
            raise UsageError("need a subcommand and an action; see --help")
        key = ALIASES.get((args.command, args.action), (args.command, args.action))
        handler = COMMANDS[key][0]
        result = handler(args)
        doc = {"config": _config(args), "result": encode(result)}
        status = 0
    except (UsageError, InvalidArgument) as e:
        doc = {"error": {"code": e.code, "module": "cli", "message": str(e)}}
        status = 1
    except GroupDetError as e:
        doc = {"error": {"code": e.code, "module": e.module, "message": str(e)}}
        status = 2
    text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    out_path = args.out if status == 0 and args is not None else None
    if out_path:
        Path(out_path).write_text(text)
    else:
        stdout.write(text)
    if status:
        print(f"{doc['error']['module']}:{doc['error']['code']}: {doc['error']['message']}", file=sys.stderr)
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
