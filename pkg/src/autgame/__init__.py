"""Graphs whose automorphism groups transform on demand under vertex deletion."""

from .aut import (AutGroup, Permutation, aut_as_abstract_group, automorphisms,
                  brute_force_automorphisms, graph_isomorphic, orbit_of,
                  stabilizer_order)
from .constructions import (RevealGadget, StabilizedGraph, build_reveal_gadget,
                            frucht_with_trivial_stabilizer)
from .errors import (AutgameError, GameError, GroupSpecError,
                     GroupValidationError, SizeLimitError, UnknownVertexError,
                     VerificationError)
from .game import (GameConfig, GameState, build_game, check_layer_restriction,
                   player_move, verify_exhaustive, verify_round)
from .graphs import Graph, VertexTag, canonical_json, graph_from_edges
from .groups import (FiniteGroup, are_isomorphic, build_group, catalog,
                     minimal_generating_set)

__version__ = "0.1.0"
