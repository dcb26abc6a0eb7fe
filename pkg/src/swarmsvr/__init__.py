"""Swarm-tuned epsilon-SVR toolkit for hourly PM2.5 forecasting.

Subpackages cover the full pipeline: CSV ingestion and preprocessing
(`dataio`), kernel functions (`kernels`), the epsilon-SVR dual solver
(`svr`), evaluation metrics (`metrics`), the PSO and GWO optimizers
(`pso`, `gwo`), hyperparameter search binding them to the SVR
(`tuner`), and the command-line pipeline (`cli`).
"""

from swarmsvr._backend import solver_backend_name

__version__ = "0.1.0"

__all__ = ["__version__", "solver_backend_name"]
