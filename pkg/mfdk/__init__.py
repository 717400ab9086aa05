"""Matrix-factorization development kit: exact algebra for matrix factorizations,
affine Lagrangian spans and the two-dimensional TFT values built from them."""

__version__ = "0.1.0"
