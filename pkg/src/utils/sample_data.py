#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
ModLP - Random FSM models over NonDetFSM, for the `sample` command and property tests.
"""

import logging
from typing import Tuple

import numpy as np
import pandas as pd

from src.lang.printer import INDENT

logger = logging.getLogger('ModLP.Utils')

FSM_DOMAIN = "NonDetFSM"
EVENT_NAMES = ("foo", "bar", "baz", "qux", "quux")


def generate_transitions(num_states=4, num_events=2, seed=None, density=0.35, deterministic=False):
    """Generate a random transition table.

    States are numbered 1..num_states. Each (state, event) pair gets a
    transition with probability density; non-deterministic machines may get a
    second target for the same pair.

    Args:
        num_states (int, optional): Number of states. Defaults to 4.
        num_events (int, optional): Number of events, at most len(EVENT_NAMES). Defaults to 2.
        seed (int, optional): Seed for numpy's default_rng. Defaults to None.
        density (float, optional): Probability of a transition per (state, event). Defaults to 0.35.
        deterministic (bool, optional): At most one target per (state, event). Defaults to False.

    Returns:
        pandas.DataFrame: Columns src, event, dst, sorted and without duplicates.
    """
    if num_states < 1:
        raise ValueError("an FSM needs at least one state")
    if not 1 <= num_events <= len(EVENT_NAMES):
        raise ValueError(f"num_events must be between 1 and {len(EVENT_NAMES)}")
    rng = np.random.default_rng(seed)
    events = EVENT_NAMES[:num_events]
    rows = []
    for src in range(1, num_states + 1):
        for event in events:
            if rng.random() >= density:
                continue
            rows.append((src, event, int(rng.integers(1, num_states + 1))))
            if not deterministic and rng.random() < density / 2:
                rows.append((src, event, int(rng.integers(1, num_states + 1))))
    frame = pd.DataFrame(rows, columns=['src', 'event', 'dst'])
    return frame.drop_duplicates().sort_values(['src', 'event', 'dst']).reset_index(drop=True)


def fsm_model_source(transitions, num_states, num_events, name="SampleMach", initial=1):
    """Render a transition table as a model of NonDetFSM.

    Every state and event is declared, so the model conforms to NonDetFSM.

    Args:
        transitions (pandas.DataFrame): Columns src, event, dst.
        num_states (int): Number of declared states.
        num_events (int): Number of declared events.
        name (str, optional): Model name. Defaults to "SampleMach".
        initial (int, optional): The initial state. Defaults to 1.

    Returns:
        str: Model source text.
    """
    lines = [f"model {name} of {FSM_DOMAIN} {{"]
    lines += [f"{INDENT}State({i})." for i in range(1, num_states + 1)]
    lines += [f'{INDENT}Event("{e}").' for e in EVENT_NAMES[:num_events]]
    lines.append(f"{INDENT}Init(State({initial})).")
    for row in transitions.itertuples(index=False):
        lines.append(f'{INDENT}Trans(State({row.src}), Event("{row.event}"), State({row.dst})).')
    lines.append("}")
    return "\n".join(lines) + "\n"


def generate_sample_model(num_states=4, num_events=2, seed=None, name="SampleMach",
                          deterministic=False) -> Tuple[str, pd.DataFrame]:
    """Generate a random conforming FSM model.

    Returns:
        tuple: (model source text, transitions DataFrame).
    """
    transitions = generate_transitions(num_states, num_events, seed, deterministic=deterministic)
    logger.info(f"Generated {name}: {num_states} states, {num_events} events, {len(transitions)} transitions")
    return fsm_model_source(transitions, num_states, num_events, name), transitions


def generate_sample_models(count, max_states=8, max_events=3, seed=None, prefix="SampleMach",
                           deterministic=False) -> str:
    """Source text of count random models with sizes drawn from the bounds."""
    rng = np.random.default_rng(seed)
    sources = []
    for i in range(count):
        states = int(rng.integers(1, max_states + 1))
        events = int(rng.integers(1, max_events + 1))
        source, _ = generate_sample_model(states, events, int(rng.integers(0, 2**31)), f"{prefix}{i}",
                                          deterministic)
        sources.append(source)
    return "\n".join(sources)


def reachable_states(transitions: pd.DataFrame, initial=1):
    """States reachable from initial in the transition table, for checking Reach results."""
    seen = {initial}
    frontier = [initial]
    edges = transitions.groupby('src')['dst'].apply(set).to_dict() if len(transitions) else {}
    while frontier:
        state = frontier.pop()
        for nxt in edges.get(state, ()):
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return sorted(seen)
