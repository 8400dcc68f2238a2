"""shadowkit: pseudo-orbit shadowing maps, hyperbolic brackets and
invariance checks on concrete desk-scale dynamical systems."""

from .core import (BoundedValue, MetricSystem, PseudoOrbit, apply_iter,
                   block_jumps, connect, discrepancy1, discrepancy2,
                   jumps, jump_at, lipschitz_geom_sum, orbit_cap,
                   orbit_map, tilde_dist_m, tilde_dist_s)
from .brackets import (Bracket, BracketDomainError, CheckReport,
                       check_f_invariance, check_hyperbolic,
                       check_identity_axiom, check_shadowing_bracket,
                       check_ss12, check_uniform_contraction,
                       fit_hyperbolic, induced_bracket)
from .bowen import (BowenConfig, InadmissibleOrbit, NonConvergence,
                    ShadowResult, StageBoundError, backward_map,
                    bowen_shadow, check_self_tuning, choose_m, eq13_bound,
                    eq13_envelope, combined_certificate, forward_map,
                    symmetric_shadow)

__version__ = "0.1.0"
