"""
Módulo de agentes: um por comando da linha de comando.
"""

from .base_agent import BaseAgent
from .moment_agent import MomentAgent
from .asymptotic_agent import AsymptoticAgent
from .joint_agent import JointAgent
from .mixed_agent import MixedAgent
from .simulate_agent import SimulateAgent
from .oracle_agent import OracleAgent
from .verify_agent import VerifyAgent

__all__ = ['BaseAgent', 'MomentAgent', 'AsymptoticAgent', 'JointAgent', 'MixedAgent',
           'SimulateAgent', 'OracleAgent', 'VerifyAgent']
