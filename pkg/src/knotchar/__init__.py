"""SL2(C) character varieties of two-generator knot groups.

Exact trace polynomials and eliminations, the boundary restriction and the
A-polynomial factor, Culler-Shalen norms from ideal points, surgery
intersection counts, and regulator integrals on the eigenvalue curve.
"""

from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("artifact")
except PackageNotFoundError:  # running from a source tree
    __version__ = "0.1.0"

from .pipeline import Knot  # noqa: E402

__all__ = ["Knot", "__version__"]
