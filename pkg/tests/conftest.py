from hypothesis import settings

settings.register_profile("phasekit", deadline=None)
settings.load_profile("phasekit")
