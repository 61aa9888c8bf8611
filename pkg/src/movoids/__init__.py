"""Partial m-ovoids of polar spaces, nearly orthogonal sets over GF(2),
and clique-free graphs of low complementary rank."""

__version__ = "0.1.0"
