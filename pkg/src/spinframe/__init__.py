"""Spin velocity of rigid bodies, Lorentz-group helpers and gyroscope precession.

Submodules:

- ``liegroup``: SO(3,R), SO(3,C), the Lorentz group, G_s and boosts acting on C^3
- ``kinematics``: Frenet frames, osculating circles, Thomas precession
- ``spin``: spin velocity of particles and bodies, averaged gravitational formulas
- ``invariants``: the J1..J4 invariants and the generalized line element
- ``precession``: gyroscope precession from N sources
- ``sim``: body discretization, rotation laws and the gravity scenarios
- ``verify`` / ``cli``: the verification suite and the batch front end
"""
from .errors import DomainError
from .kinematics import CurveJet, FrenetFrame, TrajectorySampler, frenet_frame, jet_from_sampler, \
    osculating_center, thomas_precession
from .spin import (AxisState, GravityContext, Particle, ParticleSystem, SpinTermBreakdown,
                   averaged_sphere_velocity, axis_fixed_spin_velocity, condition_ratio,
                   decompose_terms, disc_circle_radius, lambda_coefficient, newton_departure,
                   particle_spin_velocity, spin_displacement_rate, spin_down_displacement,
                   system_spin_velocity, system_spin_velocity_gravity)
from .invariants import FrameDifferential, apply_basic_property, generalized_line_element, \
    j_invariants, temporal_orthogonality_check
from .precession import GravSource, GyroState, PpnParams, omega_fermi_walker, omega_gyro, \
    omega_relative, omega_stars
from .sim import (BodyModel, ExpProductLaw, RotationLaw, SimOutput, brute_force_average,
                  discretize_disc, discretize_sphere, rigid_trajectories, run_disc_on_plane,
                  run_free_fall, run_spin_down)

__version__ = "0.1.0"
