"""Trim partitions of Stone spaces indexed by countable posets."""

from .poset import (DEFAULT_CHAIN_BOUND, FOUND, HOLDS, HOLDS_ON_PREFIX,
                    INCONCLUSIVE, REFUTED, Analytics, Extremal,
                    FoundationResult, Poset, PosetError, SubsetSpec, Verdict)
from .families import family, family_tags
from .typeset import TypeSet
from .completion import (CompletedPoset, CompletionElement, CompletionError,
                         chain_closure, complete_finite, complete_over,
                         token_name)
from .skeleton import (BuildConfig, BuildError, ConfigError, SkeletonNode,
                       SkeletonTree, StructureReport, build_levels,
                       verify_structure)
from .ring import (RingElement, RingError, is_trim_for, split_by_scarce_atoms,
                   supertrim_split, trim_split, type_of, verify_type_axioms)
from .points import (PathPrefix, PointError, PointLabel, ancestry,
                     label_prefix, realize_chain)
from .backforth import (IsoError, IsoRun, MismatchWitness, PartialIso,
                        extend_iso, init_iso, lift_poset_automorphism,
                        run_backforth)
from .closure import (Classification, ClosureElement, ClosureError, RNTrace,
                      SymbolicSpace, check_closure_axioms, check_identities,
                      classify_algebra, e_of_p, render_trace_dot,
                      render_trace_text, rieger_nishimura_run)

__version__ = "0.1.0"
