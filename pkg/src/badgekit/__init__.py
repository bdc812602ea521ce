"""Desk-scale sociometric badge toolkit.

Subpackages/modules:
    pipeline   speech-detection signal chain (filter, volume, median, threshold)
    metrics    turn-taking statistics and mediator state
    proximity  RSSI distance estimation and proximity graphs
    simulator  deterministic badge/phone simulator
    hub        registry, append-only store, pull protocol, REST API
    cli        operator entry point
"""

__version__ = "0.1.0"
