import importlib
import json
import logging

import numpy as np
import pandas as pd
import pytest
from hypothesis import given, strategies as st

from helpers import errors
from helpers.errors import ConfigError, QdSimError
from helpers.log import configure_logger, set_verbosity, LOG_FORMAT
from helpers.output import stable_hash, to_json, write_csv, write_json
from helpers.units import HBAR_UEV_NS, convert, parse_quantity, rad_ns_to_ueV, ueV_to_rad_ns


class TestUnits:
    """Unit conversion and config quantity parsing"""

    def test_ueV_round_trip(self):
        assert rad_ns_to_ueV(ueV_to_rad_ns(16.0)) == pytest.approx(16.0, rel=1e-14)

    def test_one_ueV_in_rad_per_ns(self):
        assert ueV_to_rad_ns(1.0) == pytest.approx(1 / HBAR_UEV_NS)
        assert ueV_to_rad_ns(1.0) == pytest.approx(1.519, rel=1e-3)

    def test_time_suffixes(self):
        assert parse_quantity('1us', 'ns') == pytest.approx(1000.0)
        assert parse_quantity('500 ps', 'ns') == pytest.approx(0.5)

    def test_rate_suffix_to_ueV(self):
        assert parse_quantity('1 meV', 'ueV') == pytest.approx(1000.0)

    def test_plain_number_is_taken_as_is(self):
        assert parse_quantity('0.95') == 0.95
        assert parse_quantity('16', 'ueV') == 16.0

    def test_suffix_on_dimensionless_value_rejected(self):
        with pytest.raises(ConfigError):
            parse_quantity('3 ns')

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(ConfigError):
            convert(1.0, 'ns', 'ueV')

    def test_garbage_rejected(self):
        with pytest.raises(ConfigError):
            parse_quantity('sixteen ueV', 'ueV')


class TestErrors:
    """Exception hierarchy"""

    def test_exit_codes_are_distinct(self):
        classes = [c for c in vars(errors).values()
                   if isinstance(c, type) and issubclass(c, QdSimError) and c is not QdSimError]
        codes = [c.exit_code for c in classes]
        assert len(codes) == len(set(codes)) == 12
        assert 0 not in codes

    def test_to_dict_is_machine_readable(self):
        err = errors.IntegrationError("step underflow", t=3.5)
        payload = err.to_dict()
        assert payload['error'] == 'IntegrationError'
        assert payload['exit_code'] == 7
        assert payload['details'] == {'t': 3.5}
        json.dumps(payload)


class TestOutput:
    """CSV and JSON writers"""

    def test_csv_dialect(self, tmp_path):
        df = pd.DataFrame({'x': [0.1, 2.0], 'name': ['a', 'b']})
        path = write_csv(df, tmp_path / 'sub' / 't.csv')
        raw = path.read_bytes()
        assert raw == b'x,name\n0.1,a\n2,b\n'

    def test_no_temporary_left_behind(self, tmp_path):
        write_json({'a': 1}, tmp_path / 's.json')
        assert [p.name for p in tmp_path.iterdir()] == ['s.json']

    def test_json_handles_numpy_and_non_finite(self):
        text = to_json({'x': np.float64(1.5), 'n': np.int64(3), 'bad': float('nan'), 'z': 1 + 2j})
        payload = json.loads(text)
        assert payload == {'bad': None, 'n': 3, 'x': 1.5, 'z': {'im': 2.0, 're': 1.0}}

    @given(st.dictionaries(st.text(min_size=1, max_size=5), st.integers(), min_size=1, max_size=6))
    def test_hash_ignores_key_order(self, payload):
        reordered = dict(reversed(list(payload.items())))
        assert stable_hash(payload) == stable_hash(reordered)


class TestLogging:
    """Logger factory"""

    def test_single_handler(self):
        first = configure_logger('qedcore.test_logger')
        second = configure_logger('qedcore.test_logger')
        assert first is second
        assert len(second.handlers) == 1
        assert second.handlers[0].formatter._fmt == LOG_FORMAT
        assert second.level == logging.INFO

    def test_verbosity_survives_reacquisition(self):
        logger = configure_logger('hilbert.test_verbosity')
        set_verbosity(True)
        try:
            assert configure_logger('hilbert.test_verbosity').level == logging.DEBUG
        finally:
            set_verbosity(False)
        assert logger.level == logging.INFO

    @pytest.mark.parametrize('module', [
        'qedcore.design', 'hilbert.solvers', 'reflectivity.spectra', 'reflectivity.kerr',
        'source.brightness', 'sensing.readout', 'cli.sweep', 'cli.main',
    ])
    def test_module_loggers_share_the_format(self, module):
        logger = importlib.import_module(module).logger
        assert logger.name == module
        assert [h.formatter._fmt for h in logger.handlers] == [LOG_FORMAT]
