from __future__ import annotations
from dataclasses import dataclass
from pathlib import Path
from typing import Union
import pandas as pd
import torch
from pygsr.spectral import BandSpec, igft, project, SpectralBasis


@dataclass(frozen=True)
class TimeVaryingSignal:
    """
    A sequence of graph signals indexed by the time step. A signal with a single frame is treated
    as time-invariant and provides that frame for every time step.
    """

    #: The frames, tensor of shape ``[num_frames, n]``.
    frames: torch.Tensor
    #: Bound on the change of any entry between consecutive frames.
    delta: float = 0.0

    def __post_init__(self) -> None:
        frames = torch.as_tensor(self.frames, dtype=torch.float64)
        if frames.dim() != 2 or frames.size(0) == 0:
            raise ValueError(
                f"frames must have shape [num_frames, n] but have shape {list(frames.shape)}"
            )
        object.__setattr__(self, "frames", frames)

    @classmethod
    def constant(cls, signal: torch.Tensor) -> TimeVaryingSignal:
        """
        Wraps a single graph signal as a time-invariant signal.
        """
        return cls(torch.as_tensor(signal, dtype=torch.float64).unsqueeze(0), 0.0)

    @property
    def num_frames(self) -> int:
        """
        The number of stored frames.
        """
        return self.frames.size(0)

    @property
    def num_vertices(self) -> int:
        """
        The number of vertices of every frame.
        """
        return self.frames.size(1)

    @property
    def is_time_invariant(self) -> bool:
        """
        Whether a single frame serves every time step.
        """
        return self.num_frames == 1

    def covers(self, k: int) -> bool:
        """
        Returns whether the signal provides a frame for time step ``k``.
        """
        return self.is_time_invariant or 0 <= k < self.num_frames

    def frame(self, k: int) -> torch.Tensor:
        """
        Returns the frame of time step ``k``.
        """
        if not self.covers(k):
            raise ValueError(f"signal has {self.num_frames} frames, time step {k} is unavailable")
        return self.frames[0 if self.is_time_invariant else k]

    def window(self, num_steps: int) -> torch.Tensor:
        """
        Returns the frames of the first ``num_steps`` time steps, tensor of shape
        ``[num_steps, n]``.
        """
        if not self.covers(num_steps - 1):
            raise ValueError(
                f"signal has {self.num_frames} frames but {num_steps} time steps are required"
            )
        if self.is_time_invariant:
            return self.frames.expand(num_steps, -1)
        return self.frames[:num_steps]

    def to_frame(self) -> pd.DataFrame:
        """
        Returns the signal in long format with columns ``k``, ``v`` and ``value``.
        """
        num_frames, n = self.frames.shape
        return pd.DataFrame(
            {
                "k": torch.arange(num_frames).repeat_interleave(n).numpy(),
                "v": torch.arange(n).repeat(num_frames).numpy(),
                "value": self.frames.reshape(-1).numpy(),
            }
        )

    def write_csv(self, path: Union[str, Path]) -> None:
        """
        Writes the signal in long format, see :meth:`to_frame`.
        """
        self.to_frame().to_csv(path, index=False, float_format="%.17g")


def generate_bandlimited(
    band: BandSpec, basis: SpectralBasis, rng_seed: int, norm: float = 1.0
) -> torch.Tensor:
    """
    Generates a random bandlimited graph signal. In-band spectral coefficients are drawn i.i.d.
    from a standard Normal, out-of-band coefficients are zero.

    Args:
        band: The band of the signal.
        basis: The spectral basis.
        rng_seed: The seed of the random number generator.
        norm: The Euclidean norm of the generated signal.

    Returns:
        Tensor of shape ``[n]``.
    """
    if band.size == 0:
        raise ValueError("cannot generate a bandlimited signal for an empty band")
    generator = torch.Generator().manual_seed(rng_seed)
    coefficients = torch.zeros(basis.num_vertices, dtype=torch.float64)
    coefficients[band.indices] = torch.randn(band.size, generator=generator, dtype=torch.float64)
    signal = igft(coefficients, basis)
    return signal * (norm / signal.norm())


def evolve(
    signal: torch.Tensor, band: BandSpec, basis: SpectralBasis, delta: float, rng_seed: int
) -> torch.Tensor:
    """
    Advances a bandlimited signal by one time step. A random bandlimited increment is rescaled
    such that its largest absolute entry equals ``delta``.

    Args:
        signal: The signal at the current time step.
        band: The band of the signal.
        basis: The spectral basis.
        delta: The largest change of any entry.
        rng_seed: The seed of the random number generator.

    Returns:
        The signal at the next time step.
    """
    if delta < 0:
        raise ValueError(f"delta must be nonnegative but is {delta}")
    if delta == 0:
        return signal.clone()
    increment = generate_bandlimited(band, basis, rng_seed)
    return signal + increment * (delta / increment.abs().max())


def generate_time_varying(
    band: BandSpec,
    basis: SpectralBasis,
    num_steps: int,
    delta: float,
    rng_seed: int,
    norm: float = 1.0,
) -> TimeVaryingSignal:
    """
    Generates a slowly varying bandlimited signal by chaining :meth:`evolve`.

    Args:
        band: The band of the signal.
        basis: The spectral basis.
        num_steps: The number of time steps. The signal provides ``num_steps + 1`` frames such
            that the estimate after the last step can be compared against the truth.
        delta: The largest change of any entry between consecutive frames. If zero, a
            time-invariant signal is returned.
        rng_seed: The seed of the random number generator.
        norm: The norm of the initial frame.

    Returns:
        The time-varying signal.
    """
    initial = generate_bandlimited(band, basis, rng_seed, norm)
    if delta == 0:
        return TimeVaryingSignal.constant(initial)

    generator = torch.Generator().manual_seed(rng_seed)
    seeds = torch.randint(2**31 - 1, (num_steps,), generator=generator).tolist()
    frames = [initial]
    for seed in seeds:
        frames.append(evolve(frames[-1], band, basis, delta, seed))
    return TimeVaryingSignal(torch.stack(frames), delta)


def add_out_of_band(
    signal: torch.Tensor,
    band: BandSpec,
    basis: SpectralBasis,
    fraction: float,
    rng_seed: int,
) -> torch.Tensor:
    """
    Adds a random perturbation orthogonal to the Paley-Wiener space such that the result carries
    the given fraction of its energy outside of the band.

    Args:
        signal: A bandlimited signal.
        band: The band of the signal.
        basis: The spectral basis.
        fraction: The fraction of out-of-band energy in ``[0, 1)``.
        rng_seed: The seed of the random number generator.

    Returns:
        The perturbed signal.
    """
    if not 0 <= fraction < 1:
        raise ValueError(f"out-of-band energy fraction must lie in [0, 1) but is {fraction}")
    if fraction == 0:
        return signal.clone()
    if band.size == basis.num_vertices:
        raise ValueError("the band covers every frequency, there is no out-of-band space")

    generator = torch.Generator().manual_seed(rng_seed)
    noise = torch.randn(basis.num_vertices, generator=generator, dtype=torch.float64)
    perturbation = project(noise, band, basis, side="high")
    in_band = project(signal, band, basis, side="low").norm()
    target = in_band * (fraction / (1 - fraction)) ** 0.5
    return signal + perturbation * (target / perturbation.norm())
