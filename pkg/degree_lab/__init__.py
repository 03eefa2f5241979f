"""Degree lab: mapping degree, Orlicz-Sobolev energies and homology obstructions.

Modules:
- young_functions: Young functions, their conditions and Orlicz norms
- mesh: quadrature meshes on S2, S3 and T2
- map_families: analytic maps with exact differentials
- degree: degree by Jacobian quadrature and by preimage counting
- energy: p-energies, Orlicz energies and decay experiments
- homology: exact cellular homology and the rational homology sphere test
- catalog, predicates: manifold catalog and theorem predicates
- config, runner, cli: the command line
"""
from .const import VERSION

__version__ = VERSION
