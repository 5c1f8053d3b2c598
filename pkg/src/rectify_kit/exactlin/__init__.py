from ._dispatch import BACKEND
from .fields import GF, QQ, FieldSpec
from .matrix import Matrix

__all__ = ["FieldSpec", "QQ", "GF", "Matrix", "BACKEND"]
