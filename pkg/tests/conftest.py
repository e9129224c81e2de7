from hypothesis import HealthCheck, settings

# Monte-Carlo neighbours make wall-clock per example noisy on one core;
# correctness tests should not flake on scheduling.
settings.register_profile(
    "quadmaps",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("quadmaps")
