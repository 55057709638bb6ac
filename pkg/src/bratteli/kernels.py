"""Hot loops, compiled when the extension is built.

Set ``BRATTELI_PURE_PYTHON=1`` to force the pure-Python versions.
"""

import os

if os.environ.get("BRATTELI_PURE_PYTHON"):
    from ._kernels_py import iter_words, pair_mask, word_signatures
    BACKEND = "python"
else:
    try:
        from ._kernels import iter_words, pair_mask, word_signatures
        BACKEND = "cython"
    except ImportError:
        from ._kernels_py import iter_words, pair_mask, word_signatures
        BACKEND = "python"

__all__ = ["BACKEND", "iter_words", "pair_mask", "word_signatures"]
