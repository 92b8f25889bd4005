import jax

# entropies and rate comparisons are checked at 1e-9, which needs doubles
jax.config.update("jax_enable_x64", True)

__version__ = "0.1.0"
