"""Homology, discrete Morse theory and minimal presentations of hard-square braid groups."""

from .errors import DomainError, ParseError, UnsoundMove
from .grid import CubeComplex, GridGraph, build_grid, enumerate_cells
from .hnn import HnnGroup, SGraphBundle, britton_reduce, build_Hp, build_S, identify_small, verify_theorem
from .homology import (HomologySummary, IntegerMatrix, homology, predict_betti, predict_hdim,
                       predict_wedge_betti, smith_normal_form)
from .kernels import BACKEND
from .morse import build_tree, gradient_field, morse_homology, predict_critical, select_tree
from .pipeline import census, reorganize_q3, run_pipeline, table_counts
from .presentation import Presentation, abelianization, parse_presentation, raw_presentation, render_presentation
from .raag import RaagGraph, raag_normal_form, special_membership
from .report import report_all
from .tietze import Move, TietzeEngine, replay
from .words import GenSym, cyclic_reduce, free_reduce, is_commutator_shaped, parse_word

__all__ = [
    "BACKEND", "CubeComplex", "DomainError", "GenSym", "GridGraph", "HnnGroup", "HomologySummary",
    "IntegerMatrix", "Move", "ParseError", "Presentation", "RaagGraph", "SGraphBundle", "TietzeEngine",
    "UnsoundMove", "abelianization", "britton_reduce", "build_Hp", "build_S", "build_grid", "build_tree",
    "census", "cyclic_reduce", "enumerate_cells", "free_reduce", "gradient_field", "homology",
    "identify_small", "is_commutator_shaped", "morse_homology", "parse_presentation", "parse_word",
    "predict_betti", "predict_critical", "predict_hdim", "predict_wedge_betti", "raag_normal_form",
    "raw_presentation", "render_presentation", "reorganize_q3", "replay", "report_all", "run_pipeline",
    "select_tree", "smith_normal_form", "special_membership", "table_counts", "verify_theorem",
]
