from .core import Closure, InvariantViolation, RunProfile, run, format_trace
from .naive import NaiveKAM
from .space import SpaceKAM, env_restrict
from .timekam import TimeKAM
from .lam import SpaceLAM

MACHINES = {"naive": NaiveKAM, "space": SpaceKAM, "time": TimeKAM, "lam": SpaceLAM}


def decode(machine, state):
    return machine.decode(state)


def state_bit_size(state):
    return state.bits


def abstract_space(state):
    return state.count
