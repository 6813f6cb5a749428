import hypothesis

hypothesis.settings.register_profile(
    "numerics", deadline=None, max_examples=50,
    suppress_health_check=[hypothesis.HealthCheck.too_slow])
hypothesis.settings.load_profile("numerics")
