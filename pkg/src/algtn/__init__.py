"""Algebraic tensor networks for quantum circuits over Boolean variables."""

from .circuit import CircuitBuilder, QuantumCircuit, output_probability
from .convert import convert, verify_against_oracle
from .decomp import carving_decomposition, carving_width, exact_carving_width
from .network import TensorNetwork, contract_all, value
from .poly import Polynomial
from .reduce import reduce_network, reduce_subfunction
from .tensor import AlgebraicTensor, PiElement, contract

__version__ = "0.1.0"
