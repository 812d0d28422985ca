"""Equiform Core: scalar curvature of kinematic 3-surfaces of equiform sphere motions."""

__version__ = "0.1.0"

import os


def init(config_path: str = None):
    """
    Initialize Equiform Core with a config file.

    Args:
        config_path: Path to config.yaml file. Defaults to:
                    1. EQUIFORM_CONFIG environment variable
                    2. ./config.yaml
                    3. ~/.equiform/config.yaml
    """
    if config_path is None:
        config_path = os.getenv('EQUIFORM_CONFIG')

        if not config_path and os.path.exists('./config.yaml'):
            config_path = './config.yaml'

        if not config_path:
            home_config = os.path.expanduser('~/.equiform/config.yaml')
            if os.path.exists(home_config):
                config_path = home_config

    if not config_path or not os.path.exists(config_path):
        raise FileNotFoundError(
            f"Config file not found: {config_path}. "
            "Please provide config_path or set EQUIFORM_CONFIG environment variable."
        )

    # config.py looks for config.yaml in this directory
    config_dir = os.path.dirname(os.path.abspath(config_path))
    os.environ['EQUIFORM_CONFIG_DIR'] = config_dir

    from equiform_core.config import CONFIG
    CONFIG.__init__()
