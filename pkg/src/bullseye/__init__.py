"""Bullseye-space sequence calculus.

Bi-infinite 0-1 sequences with finite descriptions, certified shifted
limits standing in for ultrafilter limits, exact asymptotic densities, the
asymptotic-cone operator and its iterations, the classical sequence
constructions (infinitely many distinct cones, periodic cones, rich
sequences realizing arbitrary densities, transfinite towers, countable cone
spectra), and a metric-graph realization of finite windows.
"""

from .cone import (ConeResult, UnidentifiedCone, UnstableAt,
                   composition_check, cone, default_horizon, iterate_cone,
                   restrict)
from .constructions import (Class1, Class2, DepthExceeded, InfmanyFamily,
                            NestedIntervalScheme, OnlycountFamily,
                            PeriodicFamily, SchemeViolation, SearchExhausted,
                            SequenceFamily, TransfiniteFamily, Unclassified,
                            VaryingFamily, build_infmany, build_onlycount,
                            build_periodic, build_transfinite, build_varying,
                            classify_cone, cone_omega,
                            find_scaling_for_density,
                            sample_classification_scalings)
from .density import (DensityReport, NotClosedForm, adn_estimate, adn_exact,
                      coherence_bound, density_report, shift_bound_check)
from .geometry import (Disconnected, MetricWindow, NotEquivalentUpTo,
                       ResolutionTooCoarse, build_window, distance,
                       graphs_isomorphic_scaled, render_svg, shift_equivalent)
from .limits import (StabilizedLimit, Unstable, UnstableTable,
                     certificate_consistent, filter_limit,
                     product_limit_check, subsample_consistent)
from .scaling import (ScalingSet, custom_schedule, default_schedule,
                      factorial_schedule, thin_check)
from .sequences import (BitSequence, Constant, DisjointnessViolation,
                        DivisibleBy, FamilyMember, Patched, PatchFamily,
                        PatchInterval, Periodic, RecursionBudgetExceeded,
                        Rich, SingleOnes, Sturmian, evaluate, materialize,
                        rich_sequence)

__all__ = [name for name in dir() if not name.startswith("_")]
