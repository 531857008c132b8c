"""Diffusion-based audio bandwidth extension.

Thin python surface over the C++ core: resampling operators, log-SNR
schedules, conditional/unconditional samplers, LSD metrics, WAV and
checkpoint I/O.
"""

from ._core import (  # noqa: F401
    Checkpoint,
    NoiseSchedule,
    ScheduleEndpoints,
    Waveform,
    band_energy_ratio,
    downsample,
    linear_logsnr_schedule,
    load_checkpoint,
    lowpass_compose,
    lsd,
    lsd_lf,
    make_ar1,
    read_wav,
    sample_unconditional_gaussian,
    spline_upsample,
    super_resolve,
    super_resolve_gaussian,
    train_toy_udm,
    upsample,
    write_wav,
)

__all__ = [
    "Checkpoint",
    "NoiseSchedule",
    "ScheduleEndpoints",
    "Waveform",
    "band_energy_ratio",
    "downsample",
    "linear_logsnr_schedule",
    "load_checkpoint",
    "lowpass_compose",
    "lsd",
    "lsd_lf",
    "make_ar1",
    "read_wav",
    "sample_unconditional_gaussian",
    "spline_upsample",
    "super_resolve",
    "super_resolve_gaussian",
    "train_toy_udm",
    "upsample",
    "write_wav",
]
