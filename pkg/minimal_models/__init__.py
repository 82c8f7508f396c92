# minimal_models/__init__.py

"""
Minimal Models Package

Exact resultants, reduction types, local minimal models and global minimal
models of endomorphisms of projective space over the rationals.
"""

from .map_model import Form, HomogeneousLift, Model
from .map_parser import MapParser
from .lattice import AdeleMatrix, Lattice, LocalLatticeData
from .pipeline import NoUnitModelFound, ReductionReport, global_minimal_model, everywhere_good_reduction_model

__version__ = '0.1.0'
