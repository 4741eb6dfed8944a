"""Collision-cone barrier safety filters for a 3D Dubins aircraft."""

from ._core import (
    AircraftState,
    BarrierEval,
    CollisionGeometry,
    ConfigError,
    ControlInput,
    DomainError,
    Error,
    FilterOutput,
    InsideCollisionRadius,
    Metrics,
    Obstacle,
    Trajectory,
    backstepped_eval,
    baseline_distance_eval,
    c3bf_eval,
    drift,
    control_matrix,
    inertial_velocity,
    coordinated_turn_rate,
    safety_filter,
    qp_reference_solve,
    run_scenario,
    step_rk4,
)

__all__ = [name for name in dir() if not name.startswith("_")]
