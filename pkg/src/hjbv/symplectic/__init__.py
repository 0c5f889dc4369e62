from .spaces import (SymplecticSpace, Subspace, relation_space,
                     omega_complement, classify_subspace, coisotropic_reduce,
                     evolution_relation_of_coisotropic,
                     relation_projection_coisotropy, compose_relations)
from .morse import MorseFamily, lagrangian_from_morse_family

__all__ = [
    "SymplecticSpace", "Subspace", "relation_space",
    "omega_complement", "classify_subspace", "coisotropic_reduce",
    "evolution_relation_of_coisotropic", "relation_projection_coisotropy",
    "compose_relations", "MorseFamily", "lagrangian_from_morse_family",
]
