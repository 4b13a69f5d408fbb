"""Deterministic 2D grid navigation with image observations.

A single agent moves on a rows x cols grid. Actions move one cell; moves off
the grid leave the agent in place. Every decision step costs step_penalty and
the step that reaches the goal earns goal_reward on top of the penalty, so the
reaching step pays goal_reward - step_penalty. Episodes end on the goal or
after max_steps decisions, whichever comes first.

Observations are obs_height x obs_width x 3 uint8 renders of the grid under a
visual theme. THEMES below is the single source of truth for renderer
geometry; golden-image tests pin its output bit for bit, so changing any value
there invalidates the fixtures.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import IntEnum
from functools import lru_cache
from typing import Optional, Tuple

import numpy as np

from .errors import ConfigurationError, UsageError


class Action(IntEnum):
    North = 0
    South = 1
    East = 2
    West = 3


# (drow, dcol) per action; row 0 is the top edge of the grid.
_DELTAS = {
    Action.North: (-1, 0),
    Action.South: (1, 0),
    Action.East: (0, 1),
    Action.West: (0, -1),
}

# Demonstrator tie-break order (not the enum order).
_TIE_BREAK = (Action.North, Action.East, Action.South, Action.West)


@dataclass(frozen=True)
class GridConfig:
    rows: int = 5
    cols: int = 5
    start_cell: Tuple[int, int] = (0, 0)
    goal_cell: Optional[Tuple[int, int]] = None  # None resolves to bottom-right
    max_steps: int = 512
    step_penalty: float = 0.001
    goal_reward: float = 1.0
    theme: str = "Target"
    obs_height: int = 64
    obs_width: int = 64
    gamma: float = 0.99

    def resolved_goal(self) -> Tuple[int, int]:
        if self.goal_cell is None:
            return (self.rows - 1, self.cols - 1)
        return tuple(self.goal_cell)


@dataclass(frozen=True)
class EnvState:
    agent_cell: Tuple[int, int]
    steps_taken: int


@dataclass(frozen=True)
class StepResult:
    observation: np.ndarray
    reward: float
    done: bool
    reached_goal: bool


def validate_config(config: GridConfig) -> None:
    if config.rows < 1 or config.cols < 1:
        raise ConfigurationError(f"grid must be at least 1x1, got {config.rows}x{config.cols}")
    if config.theme not in THEMES:
        raise ConfigurationError(f"unknown theme {config.theme!r}, expected one of {sorted(THEMES)}")
    if config.obs_height < 1 or config.obs_width < 1:
        raise ConfigurationError("observation dimensions must be positive")
    if config.max_steps < 1:
        raise ConfigurationError("max_steps must be positive")
    if config.step_penalty < 0:
        raise ConfigurationError("step_penalty must be nonnegative")
    if not 0.0 <= config.gamma < 1.0:
        raise ConfigurationError(f"gamma must be in [0, 1), got {config.gamma}")
    goal = config.resolved_goal()
    for name, cell in (("start_cell", tuple(config.start_cell)), ("goal_cell", goal)):
        r, c = cell
        if not (0 <= r < config.rows and 0 <= c < config.cols):
            raise ConfigurationError(f"{name} {cell} outside {config.rows}x{config.cols} grid")
    if tuple(config.start_cell) == goal:
        raise ConfigurationError(f"start_cell equals goal_cell {goal}")


def reset(config: GridConfig):
    """Return (EnvState, Observation) at the start cell."""
    validate_config(config)
    state = EnvState(agent_cell=tuple(config.start_cell), steps_taken=0)
    return state, render(state, config)


def _is_terminal(state: EnvState, config: GridConfig) -> bool:
    return state.agent_cell == config.resolved_goal() or state.steps_taken >= config.max_steps


def step(state: EnvState, action, config: GridConfig):
    """Apply one action. Returns (EnvState, StepResult)."""
    if _is_terminal(state, config):
        raise UsageError(f"step on terminal state {state}")
    action = Action(action)
    dr, dc = _DELTAS[action]
    r = min(max(state.agent_cell[0] + dr, 0), config.rows - 1)
    c = min(max(state.agent_cell[1] + dc, 0), config.cols - 1)
    new_state = EnvState(agent_cell=(r, c), steps_taken=state.steps_taken + 1)
    reached = new_state.agent_cell == config.resolved_goal()
    reward = (config.goal_reward if reached else 0.0) - config.step_penalty
    done = reached or new_state.steps_taken >= config.max_steps
    return new_state, StepResult(render(new_state, config), reward, done, reached)


# ---------------------------------------------------------------------------
# Renderer

# All geometry in cell units, resolved to pixels by rounding. glyph_size is a
# disk radius / square half-width / blob nominal radius (= 2 sigma of the
# Gaussian falloff) depending on the glyph kind.
THEMES = {
    "Target": {
        "bg": (192, 192, 192),
        "grid_lines": (160, 160, 160),
        "goal": (40, 180, 40),
        "goal_inset": 0.15,
        "agent": (200, 40, 40),
        "glyph": "disk",
        "glyph_size": 0.35,
    },
    "SourceVariant": {
        "bg": (186, 186, 196),
        "bg_check": (176, 178, 190),
        "goal": (60, 170, 60),
        "goal_inset": 0.20,
        "agent": (210, 90, 30),
        "glyph": "square",
        "glyph_size": 0.30,
    },
    "Thermal": {
        "bg": (8, 8, 8),
        "glyph": "blob",
        "glyph_size": 0.60,
    },
}

_FRAME_CACHE: dict = {}
_FRAME_CACHE_MAX = 16384  # frames; a 5x5 grid uses 25 per (theme, size)


def _edges(n_cells: int, n_pixels: int):
    return [round(i * n_pixels / n_cells) for i in range(n_cells + 1)]


def _paint_background(config: GridConfig) -> np.ndarray:
    theme = THEMES[config.theme]
    H, W = config.obs_height, config.obs_width
    img = np.empty((H, W, 3), dtype=np.uint8)
    img[:] = theme["bg"]
    re_, ce = _edges(config.rows, H), _edges(config.cols, W)
    if "bg_check" in theme:
        for r in range(config.rows):
            for c in range(config.cols):
                if (r + c) % 2 == 1:
                    img[re_[r]:re_[r + 1], ce[c]:ce[c + 1]] = theme["bg_check"]
    if "grid_lines" in theme:
        for k in range(1, config.rows):
            img[re_[k], :] = theme["grid_lines"]
        for k in range(1, config.cols):
            img[:, ce[k]] = theme["grid_lines"]
    if "goal" in theme:
        gr, gc = config.resolved_goal()
        cell = min(re_[gr + 1] - re_[gr], ce[gc + 1] - ce[gc])
        inset = round(theme["goal_inset"] * cell)
        img[re_[gr] + inset:re_[gr + 1] - inset, ce[gc] + inset:ce[gc + 1] - inset] = theme["goal"]
    return img


def _paint_agent(img: np.ndarray, cell, config: GridConfig) -> np.ndarray:
    theme = THEMES[config.theme]
    H, W = config.obs_height, config.obs_width
    re_, ce = _edges(config.rows, H), _edges(config.cols, W)
    r, c = cell
    cy = (re_[r] + re_[r + 1]) / 2.0
    cx = (ce[c] + ce[c + 1]) / 2.0
    cell_px = min(re_[r + 1] - re_[r], ce[c + 1] - ce[c])
    size = theme["glyph_size"] * cell_px
    yy = np.arange(H, dtype=np.float64)[:, None] + 0.5
    xx = np.arange(W, dtype=np.float64)[None, :] + 0.5
    if theme["glyph"] == "disk":
        mask = (yy - cy) ** 2 + (xx - cx) ** 2 <= size ** 2
        img[mask] = theme["agent"]
    elif theme["glyph"] == "square":
        mask = (np.abs(yy - cy) <= size) & (np.abs(xx - cx) <= size)
        img[mask] = theme["agent"]
    else:  # blob: Gaussian falloff, nominal radius = 2 sigma, no hard edge
        sigma = size / 2.0
        d2 = (yy - cy) ** 2 + (xx - cx) ** 2
        blob = np.rint(255.0 * np.exp(-d2 / (2.0 * sigma * sigma))).astype(np.uint8)
        img[:] = np.maximum(img, blob[:, :, None])
    return img


def render(state: EnvState, config: GridConfig) -> np.ndarray:
    """Deterministic uint8 (H, W, 3) image of the state under config.theme."""
    key = (config.theme, config.rows, config.cols, config.obs_height,
           config.obs_width, config.resolved_goal(), state.agent_cell)
    frame = _FRAME_CACHE.get(key)
    if frame is None:
        if len(_FRAME_CACHE) >= _FRAME_CACHE_MAX:
            _FRAME_CACHE.clear()
        frame = _paint_agent(_paint_background(config), state.agent_cell, config)
        frame.setflags(write=False)
        _FRAME_CACHE[key] = frame
    return frame.copy()


# ---------------------------------------------------------------------------
# Scripted demonstrator

@lru_cache(maxsize=64)
def _bfs_from(rows: int, cols: int, goal: Tuple[int, int]):
    """Shortest-path distance to goal for every cell, via breadth-first search."""
    dist = np.full((rows, cols), -1, dtype=np.int64)
    dist[goal] = 0
    q = deque([goal])
    while q:
        r, c = q.popleft()
        for dr, dc in _DELTAS.values():
            nr, nc = r + dr, c + dc
            if 0 <= nr < rows and 0 <= nc < cols and dist[nr, nc] < 0:
                dist[nr, nc] = dist[r, c] + 1
                q.append((nr, nc))
    dist.setflags(write=False)
    return dist


def shortest_path_length(config: GridConfig, cell=None) -> int:
    """BFS distance from cell (default start) to the goal."""
    cell = tuple(cell) if cell is not None else tuple(config.start_cell)
    return int(_bfs_from(config.rows, config.cols, config.resolved_goal())[cell])


def demonstrator_action(state: EnvState, config: GridConfig, epsilon: float,
                        rng: np.random.Generator) -> Action:
    """Quasi-optimal scripted action: shortest-path move with prob 1 - epsilon,
    uniform random otherwise. Greedy ties break in order North, East, South, West.
    One uniform draw is consumed per call regardless of epsilon."""
    if not 0.0 <= epsilon <= 1.0:
        raise ConfigurationError(f"epsilon must be in [0, 1], got {epsilon}")
    if rng.random() < epsilon:
        return Action(int(rng.integers(4)))
    dist = _bfs_from(config.rows, config.cols, config.resolved_goal())
    r, c = state.agent_cell
    here = dist[r, c]
    for action in _TIE_BREAK:
        dr, dc = _DELTAS[action]
        nr = min(max(r + dr, 0), config.rows - 1)
        nc = min(max(c + dc, 0), config.cols - 1)
        if dist[nr, nc] == here - 1:
            return action
    return Action.North  # only reachable when already at the goal
