class QKDError(Exception):
    """Base class of all errors raised by ortho_qkd."""


class LabelError(QKDError, ValueError):
    """Unknown, duplicate or missing qubit labels."""


class BasisError(QKDError, ValueError):
    """A basis that does not fit the measured qubits or does not resolve the state."""


class ConfigError(QKDError, ValueError):
    """Invalid run, noise or experiment configuration."""


class ProtocolFault(QKDError):
    """A protocol run that cannot continue, e.g. a hook returned a different set of particles."""
