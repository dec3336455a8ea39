import logging

from hydra.utils import to_absolute_path
from omegaconf import OmegaConf

import adl_module.commands  # registers the subcommands
from adl_module.errors import ConfigError
from adl_module.frontend.types import load_type_map
from adl_module.inspector.schema import load_config_dir
from adl_module.utils.registry import get_command

log = logging.getLogger(__name__)

NOTHING_TO_DO = adl_module.commands.NOTHING_TO_DO


def run(cfg) -> int:
    log.info("Stage : Startup")
    log.debug(OmegaConf.to_yaml(cfg))
    try:
        command = get_command(cfg.command)
    except ValueError as e:
        log.error(str(e))
        return NOTHING_TO_DO

    try:
        config_dir = to_absolute_path(cfg.config_dir) if cfg.config_dir else None
        config = load_config_dir(config_dir)
        type_map = dict(OmegaConf.to_container(cfg.type_map))
        if cfg.typemap:
            type_map = load_type_map(to_absolute_path(cfg.typemap), base=type_map)
    except (ConfigError, OSError) as e:
        log.error(str(e))
        return NOTHING_TO_DO

    log.info(f"Stage : {cfg.command}")
    status = command(cfg, config, type_map)
    log.info(f"Stage : Done (status {status})")
    return status
