"""Capacity bounds for the two-user Gaussian MAC with state known at one encoder.

Rates are in bits per channel use; powers are linear with unit noise variance.
"""

from .core import ChannelParams, CorrelationTriple, DomainError, DpcParams, RatePair
from .helper import condition1_check, helper_best_upper, helper_upper_thm6
from .nondegraded import (corner_points, r1_threshold, sum_rate_capacity, thm1_r1_bound,
                          thm1_region, thm2_region)
from .region import RateRegion

__version__ = "0.1.0"
