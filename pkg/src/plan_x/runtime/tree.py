from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd


DEFAULT_MAX_DEPTH = 8


def _native(value: Any) -> Any:
    return value.item() if isinstance(value, np.generic) else value


def _gini(counts: np.ndarray) -> float:
    total = counts.sum()
    if total == 0:
        return 0.0
    return float(1.0 - np.sum((counts / total) ** 2))


@dataclass
class TreeNode:
    prediction: Any
    samples: int
    gini: float
    feature: Optional[str] = None
    threshold: Optional[float] = None
    category: Any = None
    left: Optional["TreeNode"] = None
    right: Optional["TreeNode"] = None

    @property
    def is_leaf(self) -> bool:
        return self.left is None

    def goes_left(self, row: Dict[str, Any]) -> bool:
        value = row[self.feature]
        if self.threshold is not None:
            return float(value) < self.threshold
        return value == self.category

    def to_json(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {
            "prediction": _native(self.prediction),
            "samples": self.samples,
            "gini": round(self.gini, 6),
        }
        if not self.is_leaf:
            out["feature"] = self.feature
            if self.threshold is not None:
                out["threshold"] = self.threshold
            else:
                out["category"] = _native(self.category)
            out["left"] = self.left.to_json()  # type: ignore[union-attr]
            out["right"] = self.right.to_json()  # type: ignore[union-attr]
        return out

    @classmethod
    def from_json(cls, raw: Dict[str, Any]) -> "TreeNode":
        node = cls(prediction=raw["prediction"], samples=raw["samples"], gini=raw["gini"])
        if "left" in raw:
            node.feature = raw["feature"]
            node.threshold = raw.get("threshold")
            node.category = raw.get("category")
            node.left = cls.from_json(raw["left"])
            node.right = cls.from_json(raw["right"])
        return node


class DecisionTreeClassifier:
    """Greedy CART-style tree with Gini impurity and no pruning.

    Numeric features split on midpoints (``x < t`` goes left); other features
    split on equality with one category.
    """

    def __init__(self, max_depth: int = DEFAULT_MAX_DEPTH) -> None:
        self.max_depth = max_depth
        self.features: List[str] = []
        self.target: Optional[str] = None
        self.classes_: np.ndarray = np.array([])
        self.root: Optional[TreeNode] = None

    def fit(self, table: pd.DataFrame, target: str) -> "DecisionTreeClassifier":
        if target not in table.columns:
            raise ValueError(f"unknown target column '{target}'")
        if table.empty:
            raise ValueError("cannot train on an empty table")
        self.target = target
        self.features = [c for c in table.columns if c != target]
        self.classes_, codes = np.unique(table[target].to_numpy(), return_inverse=True)
        columns = [table[name] for name in self.features]
        self.root = self._grow(columns, codes, np.arange(len(table)), depth=0)
        return self

    def _counts(self, codes: np.ndarray) -> np.ndarray:
        return np.bincount(codes, minlength=len(self.classes_)).astype(float)

    def _grow(self, columns: List[pd.Series], codes: np.ndarray, rows: np.ndarray, depth: int) -> TreeNode:
        counts = self._counts(codes[rows])
        node = TreeNode(
            prediction=_native(self.classes_[int(np.argmax(counts))]),
            samples=len(rows),
            gini=_gini(counts),
        )
        if depth >= self.max_depth or node.gini == 0.0 or len(rows) < 2:
            return node
        split = self._best_split(columns, codes, rows, node.gini)
        if split is None:
            return node
        feature, threshold, category, left_mask = split
        node.feature = self.features[feature]
        node.threshold = threshold
        node.category = category
        node.left = self._grow(columns, codes, rows[left_mask], depth + 1)
        node.right = self._grow(columns, codes, rows[~left_mask], depth + 1)
        return node

    def _best_split(
        self, columns: List[pd.Series], codes: np.ndarray, rows: np.ndarray, parent_gini: float
    ) -> Optional[Tuple[int, Optional[float], Any, np.ndarray]]:
        m = len(rows)
        y = codes[rows]
        total = self._counts(y)
        best_gini = parent_gini
        best: Optional[Tuple[int, Optional[float], Any, np.ndarray]] = None
        onehot = np.eye(len(self.classes_))[y]

        for index, column in enumerate(columns):
            values = column.to_numpy()[rows]
            numeric = pd.api.types.is_numeric_dtype(column) and not pd.api.types.is_bool_dtype(column)
            if numeric:
                values = values.astype(float)
                order = np.argsort(values, kind="stable")
                xs = values[order]
                left = np.cumsum(onehot[order], axis=0)[:-1]
                right = total - left
                n_left = np.arange(1, m, dtype=float)[:, None]
                n_right = m - n_left
                gini_left = 1.0 - np.sum((left / n_left) ** 2, axis=1)
                gini_right = 1.0 - np.sum((right / n_right) ** 2, axis=1)
                weighted = (n_left[:, 0] * gini_left + n_right[:, 0] * gini_right) / m
                weighted[xs[1:] == xs[:-1]] = np.inf
                i = int(np.argmin(weighted))
                if weighted[i] < best_gini:
                    best_gini = float(weighted[i])
                    threshold = float((xs[i] + xs[i + 1]) / 2)
                    best = (index, threshold, None, values < threshold)
            else:
                for category in sorted(set(values.tolist()), key=str):
                    mask = values == category
                    n_left = int(mask.sum())
                    if n_left in (0, m):
                        continue
                    gini = (
                        n_left * _gini(self._counts(y[mask]))
                        + (m - n_left) * _gini(self._counts(y[~mask]))
                    ) / m
                    if gini < best_gini:
                        best_gini = gini
                        best = (index, None, category, mask)
        return best

    def predict(self, table: pd.DataFrame) -> List[Any]:
        if self.root is None:
            raise ValueError("model is not trained")
        missing = [name for name in self.features if name not in table.columns]
        if missing:
            raise ValueError(f"missing feature columns: {', '.join(missing)}")
        out: List[Any] = []
        for row in table[self.features].to_dict(orient="records"):
            node = self.root
            while not node.is_leaf:
                node = node.left if node.goes_left(row) else node.right  # type: ignore[assignment]
            out.append(node.prediction)
        return out

    def depth(self) -> int:
        def walk(node: Optional[TreeNode]) -> int:
            if node is None or node.is_leaf:
                return 0
            return 1 + max(walk(node.left), walk(node.right))

        return walk(self.root)

    def to_json(self) -> Dict[str, Any]:
        return {
            "algorithm": "DecisionTreeClassifier",
            "max_depth": self.max_depth,
            "target": self.target,
            "features": list(self.features),
            "classes": [_native(c) for c in self.classes_],
            "tree": self.root.to_json() if self.root else None,
        }

    @classmethod
    def from_json(cls, raw: Dict[str, Any]) -> "DecisionTreeClassifier":
        model = cls(max_depth=raw.get("max_depth", DEFAULT_MAX_DEPTH))
        model.target = raw.get("target")
        model.features = list(raw.get("features", []))
        model.classes_ = np.array(raw.get("classes", []))
        model.root = TreeNode.from_json(raw["tree"]) if raw.get("tree") else None
        return model
