from .models import FlagMean
from .service import flag_component, random_convex_sample, simplex_weights, weighted_flag_mean

__all__ = ["FlagMean", "flag_component", "random_convex_sample", "simplex_weights", "weighted_flag_mean"]
