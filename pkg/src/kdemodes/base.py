"""Minimal scikit-learn style estimator plumbing.

The estimator facades follow the usual conventions (keyword-only
constructor parameters stored verbatim, ``fit`` returning ``self``,
fitted attributes with trailing underscores, ``get_params``/``set_params``)
so they drop into sklearn pipelines and grid searches without depending
on sklearn itself.
"""

from __future__ import annotations

import inspect

__all__ = ["ParamsMixin", "NotFittedError"]


class NotFittedError(ValueError, AttributeError):
    """Raised when a fitted attribute is requested before fit."""


class ParamsMixin:
    """get_params/set_params introspected from ``__init__``."""

    @classmethod
    def _param_names(cls):
        sig = inspect.signature(cls.__init__)
        return [
            p.name
            for p in sig.parameters.values()
            if p.name != "self"
            and p.kind in (p.POSITIONAL_OR_KEYWORD, p.KEYWORD_ONLY)
        ]

    def get_params(self, deep: bool = True) -> dict:
        return {name: getattr(self, name) for name in self._param_names()}

    def set_params(self, **params):
        valid = set(self._param_names())
        for name, value in params.items():
            if name not in valid:
                raise ValueError(
                    f"invalid parameter {name!r} for {type(self).__name__}; "
                    f"valid parameters are {sorted(valid)}"
                )
            setattr(self, name, value)
        return self

    def _check_fitted(self, attr: str):
        if not hasattr(self, attr):
            raise NotFittedError(
                f"{type(self).__name__} instance is not fitted yet; call fit first"
            )
        return getattr(self, attr)

    def __repr__(self) -> str:
        args = ", ".join(f"{k}={v!r}" for k, v in self.get_params().items())
        return f"{type(self).__name__}({args})"
