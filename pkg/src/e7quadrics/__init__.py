"""Exact computations with the 56-dimensional module of E7.

Submodules, from the bottom up: ``root_system``, ``chevalley``, ``rep56``,
``forms``, ``quadrics``, ``stabilizer``; ``suites`` and ``cli`` sit on top.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .chevalley import LieElement, StructureTable, bracket, build_structure_table
from .forms import ORBIT_CLASSES, build_f, build_h, coeff_c, orbit_class, similarity
from .quadrics import QuadraticForm, build_basis, g_form, square_equation, verify_invariance
from .rep56 import ExactMatrix, evaluate_word, matrix_from_json, matrix_to_json, random_word, root_unipotent, torus_weight, weyl_element
from .rings import GF, QQ, ZZ
from .root_system import RootSystem, build_e8
from .stabilizer import cross_check, lie_dim_fh, lie_dim_GI, membership_forms, membership_GI

__all__ = [
    "__version__",
    "GF",
    "QQ",
    "ZZ",
    "RootSystem",
    "build_e8",
    "StructureTable",
    "LieElement",
    "bracket",
    "build_structure_table",
    "ExactMatrix",
    "root_unipotent",
    "torus_weight",
    "weyl_element",
    "evaluate_word",
    "random_word",
    "matrix_to_json",
    "matrix_from_json",
    "build_h",
    "build_f",
    "coeff_c",
    "similarity",
    "orbit_class",
    "ORBIT_CLASSES",
    "QuadraticForm",
    "square_equation",
    "g_form",
    "build_basis",
    "verify_invariance",
    "lie_dim_GI",
    "lie_dim_fh",
    "membership_GI",
    "membership_forms",
    "cross_check",
]
