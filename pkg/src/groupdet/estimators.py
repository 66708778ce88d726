"""scikit-learn transformers over vectors indexed by group elements.

Each row of ``X`` is a coefficient vector a = (a_g). ``fit`` resolves the group
and its character table; ``transform`` is row-wise and stateless otherwise.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .characters import character_table
from .detfact import isotypic_block_dets
from .group import FiniteGroup, resolve_group


class _GroupTransformer(TransformerMixin, BaseEstimator):
    def __init__(self, group="s3"):
        self.group = group

    def fit(self, X, y=None):
        G = self.group if isinstance(self.group, FiniteGroup) else resolve_group(self.group)
        X = check_array(X, dtype=None)
        if X.shape[1] != G.n:
            raise ValueError(f"X has {X.shape[1]} columns, the group has order {G.n}")
        self.group_ = G
        self.table_ = character_table(G)
        self.n_features_in_ = G.n
        return self

    def _check(self, X):
        check_is_fitted(self, "group_")
        X = check_array(X, dtype=None)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} columns, expected {self.n_features_in_}")
        return X


class CharacterTransform(_GroupTransformer):
    """Row a -> (sum_g chi_i(g) a_g)_i, one column per irreducible character."""

    def transform(self, X):
        X = self._check(X)
        return np.asarray(X, dtype=complex) @ self.table_.element_matrix().T


class IsotypicBlockDeterminant(_GroupTransformer):
    """Row a -> determinants of the Frobenius matrix M(a) on each isotypic block."""

    def transform(self, X):
        X = self._check(X)
        out = np.empty((X.shape[0], self.table_.s), dtype=complex)
        for r, row in enumerate(X):
            out[r] = [b.det for b in isotypic_block_dets(self.group_, row, self.table_)]
        return out
