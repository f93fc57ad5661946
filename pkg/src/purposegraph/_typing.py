"""
Commonly used typehints
"""
from __future__ import annotations

from os import PathLike
from typing import Any, Dict, Union

FilePath = Union[str, "PathLike[str]"]
JsonDict = Dict[str, Any]
AttributeValue = Union[int, float]
