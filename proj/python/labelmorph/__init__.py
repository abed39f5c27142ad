"""Plan and measure animated transitions between point labelings.

Documents are the JSON formats of the command line tool, as dicts.
"""

import json

from . import _core
from ._core import LabelmorphError, fixture_names, rect_overlap_bound

__all__ = [
    "LabelmorphError",
    "Service",
    "fixture",
    "fixture_names",
    "label",
    "plan",
    "rect_overlap_bound",
    "simulate",
    "solve",
    "verify",
]


def _text(doc):
    return doc if isinstance(doc, str) else json.dumps(doc)


def plan(from_doc, to_doc, style="dag", axis_order="horizontal_first"):
    """Plan document (phases, movements, keyframes, overlaps) between two labeling documents."""
    return json.loads(_core.plan(_text(from_doc), _text(to_doc), style, axis_order))


def solve(instance, mode="exact", k=None):
    """Direction assignment of a weighted instance: assignment, penalty, k, decision."""
    return json.loads(_core.solve(_text(instance), mode, k))


def verify(name):
    return json.loads(_core.verify(name))


def fixture(name, frozen=False):
    """The fixture's "from" and "to" labelings and its weighted "instance"."""
    return json.loads(_core.fixture(name, frozen))


def label(labels):
    """Greedy labeling document for a list of {id, x, y, width, height} labels."""
    return json.loads(_core.label(_text(labels)))


def simulate(dataset="synthetic", script="sweep3h", style="dag", seed=1, scenario="italy",
             policy="pin-on-zoom"):
    return json.loads(_core.simulate(dataset, script, style, seed, scenario, policy))


class Service:
    """In-process form of the HTTP service. Methods return (status, body)."""

    def __init__(self, config=None):
        self._service = _core.Service(_text(config or {}))

    @staticmethod
    def _reply(result):
        status, body = result
        return status, json.loads(body)

    def create_session(self, body):
        return self._reply(self._service.create_session(_text(body)))

    def interact(self, session_id, action):
        return self._reply(self._service.interact(session_id, json.dumps(action)))

    def state(self, session_id):
        return self._reply(self._service.state(session_id))

    def datasets(self):
        return self._reply(self._service.datasets())
