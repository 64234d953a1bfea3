"""Exact GF(2) computations comparing Khovanov-Seidel quiver algebras and
bimodules with Ozsvath-Szabo bordered algebras and DA bimodules."""

__version__ = "0.1.0"
