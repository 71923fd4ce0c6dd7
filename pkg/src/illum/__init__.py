"""Certified upper bounds on Hadwiger covering numbers of convex bodies.

Every real quantity is carried as an outward-rounded interval
(:class:`~illum.enclosure.Enclosure`); integer bounds are floors of
certified upper endpoints.
"""
from .enclosure import DEFAULT_PREC, DomainError, Enclosure, erf_enclosure, pi_enclosure, std_normal_cdf
from .geometry import BodyClass, ball_volume, cube_constants, simplex_volume_bound, steiner_sum
from .meanwidth import QuadratureParams, simplex_mean_width, simplex_mean_widths
from .covering import rogers_hadwiger, rogers_rn, theta_anstar, theta_best, theta_catalog
from .hadwiger import assemble, auto_plan, best_bound, john_bound, plan_general, plan_symmetric

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_PREC", "DomainError", "Enclosure", "erf_enclosure", "pi_enclosure", "std_normal_cdf",
    "BodyClass", "ball_volume", "cube_constants", "simplex_volume_bound", "steiner_sum",
    "QuadratureParams", "simplex_mean_width", "simplex_mean_widths",
    "rogers_hadwiger", "rogers_rn", "theta_anstar", "theta_best", "theta_catalog",
    "assemble", "auto_plan", "best_bound", "john_bound", "plan_general", "plan_symmetric",
]
