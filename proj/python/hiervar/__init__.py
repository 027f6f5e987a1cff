"""Random-kernel time-series features with hierarchical feature selection.

Thin wrapper over the compiled `_hiervar` extension: random convolutional
featurization (TER/rTER pooling), ridge/lasso linear models, KNEEDLE knee
pruning, ANOVA F-score filtering, and the full benchmark pipeline.
"""

from ._hiervar import *  # noqa: F401,F403

__version__ = "1.0.0"
