"""Epistemic planning and protocol synthesis via automata-compiled
history forests."""

from .errors import (
    BudgetExceeded,
    DelplanError,
    FormulaError,
    ModelError,
    NonPropositionalError,
    ScenarioError,
)
from .formula import GoalFormula, parse_formula, parse_goal
from .models import EpistemicModel, EventModel, iterate, pointed_product, product
from .planner import PlanningInstance, decide, enumerate_plans, shortest_plan, synthesize_plans
from .protocol import ProtocolAutomaton, check_protocol, synthesize_protocol
from .satcompile import SatCompiler
from .scenario import Scenario, load, loads
from .structure import RegularRepresentation, build_representation, verify_against_oracle

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded",
    "DelplanError",
    "EpistemicModel",
    "EventModel",
    "FormulaError",
    "GoalFormula",
    "ModelError",
    "NonPropositionalError",
    "PlanningInstance",
    "ProtocolAutomaton",
    "RegularRepresentation",
    "SatCompiler",
    "Scenario",
    "ScenarioError",
    "build_representation",
    "check_protocol",
    "decide",
    "enumerate_plans",
    "iterate",
    "load",
    "loads",
    "parse_formula",
    "parse_goal",
    "pointed_product",
    "product",
    "shortest_plan",
    "synthesize_plans",
    "synthesize_protocol",
    "verify_against_oracle",
]
