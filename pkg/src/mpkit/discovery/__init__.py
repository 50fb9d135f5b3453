"""Mining computed profiles: motifs, discords, chains and segments."""

from .chains import MIN_CHAIN, ChainSet, find_chains
from .fluss import FlussResult, arc_counts_from_index, fluss, fluss_arc_count, fluss_cac, fluss_extract
from .motifs import DiscordSet, MotifSet, find_discord, find_motif

__all__ = [
    "MIN_CHAIN",
    "ChainSet",
    "DiscordSet",
    "FlussResult",
    "MotifSet",
    "arc_counts_from_index",
    "find_chains",
    "find_discord",
    "find_motif",
    "fluss",
    "fluss_arc_count",
    "fluss_cac",
    "fluss_extract",
]
