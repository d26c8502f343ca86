"""Kinematic bicycle motion for fleet vehicles.

The model tracks the center of gravity of each vehicle. With slip angle
psi, heading sigma, speed v, and acceleration a, one slot of length dt
advances the state as

    x'     = x + v * cos(sigma + psi) * dt
    y'     = y + v * sin(sigma + psi) * dt
    v'     = max(0, v + a * dt)
    sigma' = sigma + v * sin(psi) / L_r * dt

and psi = atan(L_r * tan(steer) / (L_r + L_f)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass
class VehicleState:
    """Planar pose of one vehicle; heading normalized to (-pi, pi]."""

    x_m: float
    y_m: float
    velocity_mps: float
    heading_rad: float

    def __post_init__(self):
        if self.velocity_mps < 0:
            raise ValueError("velocity_mps must be non-negative")
        self.heading_rad = normalize_heading(self.heading_rad)


@dataclass
class ControlInput:
    accel_mps2: float = 0.0
    front_steer_rad: float = 0.0

    def __post_init__(self):
        if not abs(self.front_steer_rad) < math.pi / 2:
            raise ValueError("front steering angle must satisfy |steer| < pi/2")


@dataclass
class BodyGeometry:
    """Axle-to-center-of-gravity distances in meters."""

    front_axle_to_cg_m: float = 1.105
    rear_axle_to_cg_m: float = 1.738

    def __post_init__(self):
        if self.front_axle_to_cg_m <= 0 or self.rear_axle_to_cg_m <= 0:
            raise ValueError("axle distances must be positive")


def normalize_heading(theta: float) -> float:
    """Wrap an angle into (-pi, pi]."""
    wrapped = math.fmod(theta, 2.0 * math.pi)
    if wrapped > math.pi:
        wrapped -= 2.0 * math.pi
    elif wrapped <= -math.pi:
        wrapped += 2.0 * math.pi
    return wrapped


def slip_angle(inp: ControlInput, geom: BodyGeometry) -> float:
    """Slip angle of the vehicle body for a front steering command."""
    if not abs(inp.front_steer_rad) < math.pi / 2:
        raise ValueError("front steering angle must satisfy |steer| < pi/2")
    lr = geom.rear_axle_to_cg_m
    lf = geom.front_axle_to_cg_m
    return math.atan(lr * math.tan(inp.front_steer_rad) / (lr + lf))


def step_bicycle(state: VehicleState, inp: ControlInput, geom: BodyGeometry,
                 dt: float) -> VehicleState:
    """Advance one vehicle by dt seconds. Speed clamps at zero."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    psi = slip_angle(inp, geom)
    v = state.velocity_mps
    x = state.x_m + v * math.cos(state.heading_rad + psi) * dt
    y = state.y_m + v * math.sin(state.heading_rad + psi) * dt
    v_next = max(0.0, v + inp.accel_mps2 * dt)
    heading = state.heading_rad + v * math.sin(psi) / geom.rear_axle_to_cg_m * dt
    return VehicleState(x, y, v_next, heading)


def pairwise_distance(a: VehicleState, b: VehicleState) -> float:
    """Euclidean distance between two vehicle positions in meters."""
    return math.hypot(a.x_m - b.x_m, a.y_m - b.y_m)
