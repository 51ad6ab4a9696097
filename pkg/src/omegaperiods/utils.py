import json
import logging
import math
import os

from omegaperiods.errors import InputError

logger = logging.getLogger(__name__)

ENV_TOL = "OMEGA_TOL"


def parse_complex(text):
    """
    Parses a complex literal of the form `re`, `re+imi`, `re-imi` or `imi`

    :param text: the literal, e.g. "0.5-0.25i"
    :return: the complex value
    """
    literal = str(text).strip().replace(" ", "")
    if not literal or "j" in literal.lower() or "(" in literal:
        raise InputError("Invalid complex literal '{}'".format(text))
    if literal.endswith("i"):
        literal = literal[:-1] + "j"
    try:
        value = complex(literal)
    except ValueError:
        raise InputError("Invalid complex literal '{}'".format(text))
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise InputError("Complex literal '{}' is not finite".format(text))
    return value


def format_complex(value):
    value = complex(value)
    if value.imag == 0:
        return repr(value.real)
    sign = "+" if math.copysign(1.0, value.imag) > 0 else "-"
    return "{}{}{}i".format(repr(value.real), sign, repr(abs(value.imag)))


def parse_complex_list(text):
    return [parse_complex(item) for item in str(text).split(",") if item.strip()]


def _parse_sample_line(line):
    """
    Parses one line `re[,im]` of a batch file
    """
    parts = [p.strip() for p in line.split(",")]
    if len(parts) not in (1, 2) or not parts[0]:
        raise InputError("Invalid batch line '{}'".format(line.rstrip()))
    try:
        re_part = float(parts[0])
        im_part = float(parts[1]) if len(parts) == 2 else 0.0
    except ValueError:
        raise InputError("Invalid batch line '{}'".format(line.rstrip()))
    return complex(re_part, im_part)


def read_samples(path):
    try:
        with open(path) as samples_f:
            return [_parse_sample_line(line) for line in samples_f if line.strip()]
    except OSError as e:
        raise InputError("Can not read batch file {}: {}".format(path, e))


def _complex_to_json(value):
    value = complex(value)
    return {"re": value.real, "im": value.imag}


def _json_to_complex(document):
    return complex(document["re"], document["im"])


def read_config(config_path=None):
    """
    Reads the configuration layers: the optional JSON file and the environment

    :param config_path: path of a JSON configuration file, or None
    :return: a dict with the keys "quadrature", "workers" and "potential"
    """
    config = {"quadrature": {}, "workers": None, "potential": None}
    if config_path:
        try:
            with open(config_path) as config_f:
                file_config = json.load(config_f)
        except (OSError, ValueError) as e:
            raise InputError("Can not read config file {}: {}".format(config_path, e))
        config["quadrature"].update(file_config.get("quadrature", {}))
        config["workers"] = file_config.get("workers")
        config["potential"] = file_config.get("potential")
    env_tol = os.environ.get(ENV_TOL)
    if env_tol:
        try:
            config["quadrature"]["tol"] = float(env_tol)
        except ValueError:
            raise InputError("{} must be a real number, got '{}'".format(ENV_TOL, env_tol))
        logger.debug("tolerance {} taken from {}".format(env_tol, ENV_TOL))
    return config
