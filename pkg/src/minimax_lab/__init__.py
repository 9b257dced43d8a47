"""Exact checks of minimax lower-bound machinery for factor-graph structured prediction."""

from ._config import CapacityError
from .adversarial import (AdversarialFamily, assouad_bound, bayes_of_B, build_distribution,
                          default_p, eta, hellinger_closed_form, hellinger_sq,
                          hypercube, intermediate_bound, l11_distance, marginal_x,
                          nearest_hypercube_point)
from .dimension import (BinaryFunctionClass, PairFunctionClass, derive_h_classes,
                        dim_pairs, max_dim_pairs, restricted_class, shatters_pairs,
                        theorem2_check, vc_dim)
from .experiment import (GameConfig, expected_excess_exact, expected_excess_mc, sweep,
                         worst_case)
from .graph import FactorGraph, from_edges, new_chain, new_grid, pair_set, validate
from .learners import (ConstantZeroClassifier, ERMClassifier, OracleClassifier,
                       PluginClassifier)
from .risk import (Dataset, FiniteDistribution, bayes_predictor, bayes_risk,
                   empirical_risk, excess_risk, expected_risk, hamming_loss,
                   risk_via_marginals, sample)
from .scoring import (DomainError, InputDomain, TabularScoring, all_tabular_classes,
                      random_class)

__version__ = "0.1.0"
