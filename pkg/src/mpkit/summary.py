"""Plain-text summary blocks for profiles and discovery results."""

from __future__ import annotations

from .discovery import ChainSet, DiscordSet, FlussResult, MotifSet


def _block(title, lines):
    return "\n".join([title, "-" * len(title), *lines])


def _plural(count, word):
    return f"{count} {word}" if count == 1 else f"{count} {word}s"


def profile_block(profile, shapes) -> str:
    """Header block; ``shapes`` lists ``(observations, dimensions)`` per input series."""
    d = shapes[0][1]
    if len(shapes) == 1:
        contains = f"Contains 1 set of data with {shapes[0][0]} observations and {_plural(d, 'dimension')}"
    else:
        counts = " and ".join(str(n) for n, _ in shapes)
        contains = f"Contains {len(shapes)} sets of data with {counts} observations and {_plural(d, 'dimension')}"
    lines = [
        f"Profile size = {profile.size}",
        f"Window size = {profile.window}",
        f"Exclusion zone = {profile.exclusion_zone}",
        contains,
    ]
    if profile.coverage < 1.0:
        lines.append(f"Coverage = {profile.coverage:.4f} (stopped early)")
    return _block("Matrix Profile", lines)


def motif_block(motifs: MotifSet) -> str:
    pairs = " ".join(f"[{a}, {b}]" for a, b, _ in motifs.pairs)
    neighbors = " ".join("[" + ", ".join(str(v) for v in ns) + "]" for ns in motifs.neighbors)
    lines = [
        f"Motif pairs founded = {len(motifs.pairs)}",
        f"Motif pairs indexes = {pairs}",
        f"Motif pairs neighbors = {neighbors}",
    ]
    if motifs.dims is not None:
        lines.append("Motif pairs dimensions = " + " ".join("[" + ", ".join(map(str, d)) + "]" for d in motifs.dims))
    return _block("Motif", lines)


def discord_block(discords: DiscordSet) -> str:
    lines = [
        f"Discords founded = {len(discords.discords)}",
        "Discords indexes = " + " ".join(str(i) for i, _ in discords.discords),
        "Discords distances = " + " ".join(f"{v:.3f}" for _, v in discords.discords),
    ]
    if discords.truncated:
        lines.append(f"Only {len(discords.discords)} of {discords.requested} requested discords exist")
    return _block("Discord", lines)


def chain_block(chains: ChainSet) -> str:
    return _block("Chain", [
        f"Chains founded = {chains.count}",
        f"Best Chain size = {len(chains.best_chain)}",
        "Best Chain indexes = " + " ".join(str(i) for i in chains.best_chain),
    ])


def fluss_blocks(result: FlussResult) -> str:
    arc = _block("Arc Count", [
        f"Profile size = {len(result.arc_counts)}",
        f"Minimum normalized count = {result.min_value:.3f} at index {result.min_index}",
    ])
    lines = [
        f"Segments = {len(result.segments)}",
        "Segmentation indexes = " + " ".join(str(s) for s in result.segments),
    ]
    if result.truncated:
        lines.append(f"Only {len(result.segments)} of {result.num_segments} requested segments found")
    return arc + "\n\n" + _block("Fluss", lines)


def result_block(result) -> str:
    if isinstance(result, MotifSet):
        return motif_block(result)
    if isinstance(result, DiscordSet):
        return discord_block(result)
    if isinstance(result, ChainSet):
        return chain_block(result)
    if isinstance(result, FlussResult):
        return fluss_blocks(result)
    raise TypeError(f"no summary for {type(result).__name__}")


def summarize(profile, shapes, results=()) -> str:
    """Profile block followed by one block per result, blank-line separated."""
    parts = [profile_block(profile, shapes)]
    parts.extend(result_block(r) for r in results)
    return "\n\n".join(parts) + "\n"
