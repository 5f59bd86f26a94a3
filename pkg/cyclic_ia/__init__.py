import logging

from cyclic_ia.schemes import SCHEME_TAGS, get_scheme


class Workbench:
    """Configured entry point: settings plus the scheme registry."""

    def __init__(self):
        self.config = {}

    def from_object(self, obj):
        for key in dir(obj):
            if key.isupper():
                self.config[key] = getattr(obj, key)

    @property
    def payload_bits(self) -> int:
        return int(self.config.get('CIA_PAYLOAD_BITS', 8))

    @property
    def jobs(self) -> int:
        return max(1, int(self.config.get('CIA_JOBS', 1)))

    @property
    def search_max_n(self) -> int:
        return int(self.config.get('CIA_SEARCH_MAX_N', 7))

    @property
    def sample_attempts(self) -> int:
        return int(self.config.get('CIA_SAMPLE_ATTEMPTS', 200000))

    @property
    def default_scheme(self) -> str:
        tag = self.config.get('CIA_DEFAULT_SCHEME', 'none')
        return tag if tag in SCHEME_TAGS else 'none'

    def scheme(self, tag=None):
        return get_scheme(tag or self.default_scheme)


def create_app(config_class=None):
    app = Workbench()

    if config_class:
        app.from_object(config_class)
    else:
        from config import Config
        app.from_object(Config)

    level = str(app.config.get('CIA_LOG_LEVEL', 'WARNING')).upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format='%(asctime)s %(levelname)s %(name)s: %(message)s')
    logging.getLogger('cyclic_ia').setLevel(getattr(logging, level, logging.WARNING))
    return app
