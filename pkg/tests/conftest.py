import logging
import sys
from pathlib import Path

import pytest
from hydra import compose, initialize_config_dir

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from adl_module.frontend.parser import parse_header
from adl_module.inspector.schema import load_config_dir
from adl_module.model.element import IMPORTED_PART, PROJECT_PART, Model

DATA = Path(__file__).resolve().parent / "data"
CONFIG = ROOT / "config"
INSPECTOR = CONFIG / "inspector"
HVD_HEADER = DATA / "src" / "LArTBEvent" / "LArTBHVDData.h"
GOLDEN = DATA / "golden" / "LArTBHVDData.adl"

# one imported class, one EXTERNAL, one ADLEXT and two full ADL classes
MIXED_HEADER = """
/** @adl.enabled EXTERNAL */
class HandWritten {
public:
  double value;
};

/** @adl.enabled ADLEXT */
class Forwarded {
public:
  double value;
};

class Track {
public:
  Track();
  double pt() const;
private:
  double m_pt;
};

/** @adl.interface DataObject */
class Event {
public:
  Event();
  ~Event();
  long eventNumber() const;
private:
  int m_number;
  Track m_track;
};
"""

IMPORTED_HEADER = """
class Library {
public:
  double value;
};
"""


@pytest.fixture
def inspector_config():
    return load_config_dir(INSPECTOR)


def build(sources, schemas=None):
    """Model from {path: text}; paths under ``lib/`` are imported."""
    model = Model(schemas=schemas)
    for path, text in sources.items():
        part = IMPORTED_PART if path.startswith("lib/") else PROJECT_PART
        for package in parse_header(text, path, part):
            model.add_package(package)
    return model


@pytest.fixture
def hvd_model():
    return build({"LArTBEvent/LArTBHVDData.h": HVD_HEADER.read_text()})


@pytest.fixture
def mixed_model():
    return build({"lib/Library.h": IMPORTED_HEADER, "Mixed/Mixed.h": MIXED_HEADER})


@pytest.fixture
def mixed_tree(tmp_path):
    (tmp_path / "lib").mkdir()
    (tmp_path / "src" / "Mixed").mkdir(parents=True)
    (tmp_path / "lib" / "Library.h").write_text(IMPORTED_HEADER)
    (tmp_path / "src" / "Mixed" / "Mixed.h").write_text(MIXED_HEADER)
    return tmp_path


@pytest.fixture
def make_cfg():
    def _make_cfg(*overrides):
        with initialize_config_dir(config_dir=str(CONFIG), job_name="test"):
            return compose(
                config_name="main", overrides=[f"config_dir={INSPECTOR}", *overrides]
            )

    return _make_cfg


@pytest.fixture(autouse=True)
def _info_logs(caplog):
    caplog.set_level(logging.INFO)
