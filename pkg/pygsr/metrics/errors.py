from __future__ import annotations
import math
from typing import Dict, Tuple
import torch
from pygsr.reconstruction import biased_target, Schedule
from pygsr.sampling import SamplingPlan
from pygsr.spectral import BandSpec, operator_norm, project, SpectralBasis


def band_errors(
    f_k: torch.Tensor, f_tilde_k: torch.Tensor, band: BandSpec, basis: SpectralBasis
) -> Tuple[float, float]:
    """
    Splits the distance of an estimate to a bandlimited target into its in-band and out-of-band
    parts.

    Args:
        f_k: The estimate of shape ``[n]``.
        f_tilde_k: The bandlimited target of shape ``[n]``.
        band: The band.
        basis: The spectral basis.

    Returns:
        The in-band error ``|P(f_k - f_tilde_k)|`` and the out-of-band error ``|P+ f_k|``.
    """
    leakage = project(f_tilde_k, band, basis, side="high").norm()
    if leakage > 1e-8:
        raise ValueError(f"target must be bandlimited but has out-of-band norm {leakage:.3g}")
    difference = f_k - f_tilde_k
    e = project(difference, band, basis, side="low").norm()
    e_plus = project(f_k, band, basis, side="high").norm()
    return float(e), float(e_plus)


def delay_mismatch(
    current: torch.Tensor, delayed: torch.Tensor, frame: torch.Tensor
) -> torch.Tensor:
    """
    Computes ``|sum_u (f(u) I - F_u) P δ_u|`` where ``F_u`` holds the delayed estimates of sensor
    ``u`` as seen by every vertex.

    Args:
        current: The current estimates at the sensors, shape ``[num_samples]``.
        delayed: The delayed estimates of every sensor per vertex, shape ``[num_samples, n]``.
        frame: The frame elements, shape ``[num_samples, n]``.

    Returns:
        Scalar tensor.
    """
    return ((current.unsqueeze(1) - delayed) * frame).sum(0).norm()


def trajectory_diagnostics(
    trajectory: torch.Tensor, plan: SamplingPlan
) -> Tuple[torch.Tensor, torch.Tensor]:
    """
    Computes the change between consecutive estimates and the delay mismatch for every time step
    of a trajectory.

    Args:
        trajectory: The estimates of time steps ``0, ..., K``, shape ``[K + 1, n]``.
        plan: The sampling plan whose delays produced the trajectory.

    Returns:
        - Tensor of shape ``[K + 1]`` with ``|f_k - f_(k-1)|`` (zero for ``k = 0``).
        - Tensor of shape ``[K + 1]`` with the delay mismatch, NaN for ``k < tau_max``.
    """
    num_steps = trajectory.size(0)
    delta = torch.zeros(num_steps, dtype=torch.float64)
    delta[1:] = (trajectory[1:] - trajectory[:-1]).norm(dim=1)

    eta = torch.full((num_steps,), math.nan, dtype=torch.float64)
    samples = trajectory[:, plan.sample_set]
    delays = plan.sample_delays
    for k in range(plan.tau_max, num_steps):
        delayed = samples.T.gather(1, k - delays)
        eta[k] = delay_mismatch(samples[k], delayed, plan.frame)
    return delta, eta


def appendix_diagnostics(trajectory: torch.Tensor, plan: SamplingPlan) -> Tuple[float, float]:
    """
    Computes the change ``delta_k`` and the delay mismatch ``eta_k`` of the last estimate of a
    trajectory.

    Args:
        trajectory: The estimates of time steps ``0, ..., k``, shape ``[k + 1, n]``. Must cover at
            least the maximal delay of the plan and two time steps.
        plan: The sampling plan whose delays produced the trajectory.

    Returns:
        The values ``delta_k`` and ``eta_k``.
    """
    if trajectory.size(0) < max(plan.tau_max + 1, 2):
        raise ValueError(
            f"trajectory of {trajectory.size(0)} estimates does not cover the maximal delay "
            f"{plan.tau_max}"
        )
    window = trajectory[-max(plan.tau_max + 1, 2) :]
    delta, eta = trajectory_diagnostics(window, plan)
    return float(delta[-1]), float(eta[-1])


def inequality_violations(
    trajectory: torch.Tensor, f_star: torch.Tensor, plan: SamplingPlan, schedule: Schedule
) -> Dict[str, float]:
    """
    Checks the one-step inequalities that bound the errors of a run with a constant schedule and
    a time-invariant true signal. Every quantity on both sides is computed from the trajectory.

    - ``out_band``: ``e+_(k+1) <= (1 - μβ) e+_k + μ η_k``
    - ``in_band``: ``e_(k+1) <= ρ e_k + μ |T| e+_k + μ η_k`` with
      ``ρ = max(|1 - μβ - μA|, |1 - μβ - μB|)``
    - ``eta``: ``η_k <= sqrt(|S|) sum_(i<τ) δ_(k-i)``
    - ``delta``: ``δ_k <= μ ((β + |T|)(e_(k-1) + e+_(k-1)) + η_(k-1))``

    Args:
        trajectory: The estimates of time steps ``0, ..., K``, shape ``[K + 1, n]``.
        f_star: The true signal of shape ``[n]``.
        plan: The sampling plan whose delays produced the trajectory.
        schedule: The constant schedule of the run.

    Returns:
        The smallest slack (right-hand side minus left-hand side) of every inequality over all
        time steps at which it is defined. Negative values are violations.
    """
    if schedule.kind != "constant":
        raise ValueError("error recursions are only defined for constant schedules")
    mu, beta = schedule.mu, schedule.beta
    lower, upper = plan.frame_bounds
    norm_t = operator_norm(plan.frame)
    tau = plan.tau_max

    target = biased_target(f_star, plan, beta)
    e = project(trajectory - target, plan.band, plan.basis, side="low").norm(dim=1)
    e_plus = project(trajectory, plan.band, plan.basis, side="high").norm(dim=1)
    delta, eta = trajectory_diagnostics(trajectory, plan)

    num_steps = trajectory.size(0)
    rho = max(abs(1 - mu * beta - mu * lower), abs(1 - mu * beta - mu * upper))
    slacks: Dict[str, float] = {}

    now = torch.arange(tau, num_steps - 1)
    if now.numel() > 0:
        out_band = (1 - mu * beta) * e_plus[now] + mu * eta[now] - e_plus[now + 1]
        in_band = rho * e[now] + mu * norm_t * e_plus[now] + mu * eta[now] - e[now + 1]
        slacks["out_band"] = float(out_band.min())
        slacks["in_band"] = float(in_band.min())

    now = torch.arange(max(tau, 1), num_steps)
    if now.numel() > 0:
        window = torch.stack([delta[now - i] for i in range(tau)]) if tau > 0 else None
        bound = math.sqrt(plan.num_samples) * window.sum(0) if window is not None else 0.0
        slacks["eta"] = float((bound - eta[now]).min())

    now = torch.arange(tau + 1, num_steps)
    if now.numel() > 0:
        previous = now - 1
        bound = mu * ((beta + norm_t) * (e[previous] + e_plus[previous]) + eta[previous])
        slacks["delta"] = float((bound - delta[now]).min())
    return slacks
