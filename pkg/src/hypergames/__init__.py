"""Deceptive strategy synthesis for reachability games on graphs.

Player 1 pursues a reachability objective against a player 2 who
misperceives her action set and updates that perception whenever she
reveals a private action. The library models the interaction as a
product of the true game with the perception's inference graph, computes
where deception lets P1 win surely or almost surely, extracts the
strategies, and validates them by simulation against an independent
oracle. A co-safe LTL front end and a capture-the-flag benchmark
generator feed larger instances.
"""

__version__ = "0.1.0"
