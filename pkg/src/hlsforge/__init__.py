"""hlsforge: HLS-C analysis, fault injection, verification-gated datasets,
iterative repair, and pragma tuning with an analytic QoR model."""

__version__ = "0.1.0"
