"""Exact generalized Hamilton-Jacobi actions for constrained one-dimensional
systems and their boundary (BV-BFV) quantization.

The package is organized in layers:

- ``hjbv.algebra``: exact scalars, truncated hbar series, multivariate
  polynomials, Grassmann algebra and exponential states.
- ``hjbv.linalg``: exact rational matrix utilities.
- ``hjbv.symplectic``: linear symplectic spaces, subspace classification,
  coisotropic reduction, canonical relations, Morse families.
- ``hjbv.classical``: constraint systems, evolution oracle, closed-form
  Hamilton-Jacobi actions, WZW-type functionals, Legendre transforms.
- ``hjbv.quantize``: star products, BFV/BV actions, boundary operators.
- ``hjbv.partition``: partition states, mQME checks, BV pushforward,
  gluing, quantum mechanics and the relativistic particle.
"""

__version__ = "0.1.0"
