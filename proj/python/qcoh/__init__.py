"""Coherence, discord and incoherent-channel toolkit."""

from ._qcoh import (
    QcohError,
    amplitude_damping,
    apply,
    bit_flip,
    c_l1,
    c_re,
    classify,
    commutant,
    correlation_matrix,
    dilate,
    discord,
    gio_from_correlation,
    iterate,
    luders,
    measure,
    phase_damping,
    povm_coherence,
    verify,
    von_neumann_entropy,
)

__all__ = [
    "QcohError",
    "amplitude_damping",
    "apply",
    "bit_flip",
    "c_l1",
    "c_re",
    "classify",
    "commutant",
    "correlation_matrix",
    "dilate",
    "discord",
    "gio_from_correlation",
    "iterate",
    "luders",
    "measure",
    "phase_damping",
    "povm_coherence",
    "verify",
    "von_neumann_entropy",
]
