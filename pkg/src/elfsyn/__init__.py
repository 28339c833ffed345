"""AIG refactoring toolkit with a learned cut-pruning classifier."""

from .aig import FALSE, TRUE, Aig, CycleError, lit, lit_compl, lit_neg, lit_node
from .aiger import AigerError, parse_aiger, read_aiger, write_aiger
from .cuts import Cut, TruthTable, cut_truth_table, reconv_cut
from .features import (FEATURE_NAMES, FeatureVector, collect_all,
                       count_reconvergent, extract_features)
from .model import (LAYER_DIMS, Metrics, Mlp, TrainConfig, evaluate, forward,
                    init_xavier, load_model, normalize_batch, save_model,
                    train)
from .passes import (NodeLabel, PassParams, PassStats, collect_labels,
                     relative_difference, run_elf, run_refactor)
from .resyn import (Candidate, Cube, FactorTree, SopCover, build_factored_subgraph,
                    commit_candidate, discard_candidate, eval_refactor, factor,
                    isop)
from .verify import (EquivResult, SimPattern, check_equiv_exhaustive,
                     check_equiv_random, random_patterns, simulate)

__version__ = "0.1.0"
