"""
Unit tests for the strict JSON configuration loader.
"""
import json

import pytest
from jsonschema import Draft202012Validator

from src.cli.config_loader import DEFAULT_WEAK_THETA, load_config, parse_config
from src.core.exceptions import ConfigurationError
from src.discrimination import PovmMode
from src.interferometer.config import NestedMziConfig
from src.qcore.state import ModeLabel

L = ModeLabel


@pytest.mark.unit
class TestDefaults:

    @pytest.mark.parametrize("text", ["{}", "", "  \n"])
    def test_empty_documents_give_the_tuned_network(self, text):
        loaded = parse_config(text)
        assert loaded.network == NestedMziConfig()
        assert loaded.experiments.accounting.theta == DEFAULT_WEAK_THETA
        assert loaded.experiments.accounting.povm == PovmMode.BASIS_CHECK
        assert loaded.experiments.phase_scan.segment == L.C

    def test_no_path_means_defaults(self):
        assert load_config(None).network == NestedMziConfig()


@pytest.mark.unit
class TestNetworkKeys:

    def test_blocked_list(self, sample_configs):
        loaded = parse_config(json.dumps(sample_configs["only_b"]))
        assert loaded.network.blocked == frozenset({L.A, L.C})

    def test_markers_and_phases(self, sample_configs):
        text = json.dumps({**sample_configs["weak_markers"], "phases": {"A": 0.5}})
        network = parse_config(text).network
        assert [marker.location for marker in network.markers] == [L.A, L.B, L.C]
        assert network.phases == {L.A: 0.5}

    def test_bad_marker_location_names_key_and_line(self):
        text = '{\n  "markers": [\n    {"location": "Q", "theta": 0.1}\n  ]\n}'
        with pytest.raises(ConfigurationError) as exc_info:
            parse_config(text)
        assert exc_info.value.key == "markers.0.location"
        assert exc_info.value.line == 3
        assert "'Q'" in str(exc_info.value)

    def test_unknown_key(self, sample_configs):
        text = json.dumps(sample_configs["unknown_key"], indent=2)
        with pytest.raises(ConfigurationError) as exc_info:
            parse_config(text)
        assert exc_info.value.key == "mirror_count"
        assert exc_info.value.line == 3

    def test_marker_angle_out_of_range(self):
        with pytest.raises(ConfigurationError) as exc_info:
            parse_config('{"markers": [{"location": "A", "theta": 2.0}]}')
        assert exc_info.value.key == "markers.0.theta"

    def test_duplicate_markers(self):
        text = '{"markers": [{"location": "A", "theta": 0.1}, {"location": "A", "theta": 0.2}]}'
        with pytest.raises(ConfigurationError, match="Duplicate marker"):
            parse_config(text)

    def test_malformed_json_reports_its_line(self):
        with pytest.raises(ConfigurationError) as exc_info:
            parse_config('{\n  "t1": 0.3\n  "t2": 0.5\n}')
        assert exc_info.value.line == 3
        assert "Malformed JSON" in str(exc_info.value)

    def test_top_level_must_be_an_object(self):
        with pytest.raises(ConfigurationError, match="JSON object"):
            parse_config("[1, 2]")


@pytest.mark.unit
class TestExperimentBlocks:

    def test_accounting_block(self, sample_configs):
        loaded = parse_config(json.dumps(sample_configs["small_accounting"]))
        block = loaded.experiments.accounting
        assert block.trials == 100000
        assert block.seed == 42
        assert block.povm == PovmMode.BASIS_CHECK
        assert loaded.network == NestedMziConfig()

    def test_spectrum_block_builds_a_vibration_config(self, sample_configs):
        loaded = parse_config(json.dumps({**sample_configs["small_spectrum"], "t3": 0.45}))
        vib = loaded.experiments.spectrum.to_vibration(loaded.network, seed=9)
        assert vib.n_frames == 1024
        assert vib.sample_rate == 256.0
        assert vib.seed == 9
        assert vib.network.t3 == 0.45

    def test_unknown_key_inside_a_block(self):
        with pytest.raises(ConfigurationError) as exc_info:
            parse_config('{"accounting": {"trails": 5}}')
        assert exc_info.value.key == "accounting.trails"

    def test_block_value_range(self):
        with pytest.raises(ConfigurationError) as exc_info:
            parse_config('{"phase_scan": {"points": 1}}')
        assert exc_info.value.key == "phase_scan.points"


@pytest.mark.unit
class TestLoadConfig:

    def test_reads_a_file(self, write_config):
        loaded = load_config(write_config("detuned_bs3"))
        assert loaded.network.t3 == 0.45

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigurationError) as exc_info:
            load_config(str(tmp_path / "absent.json"))
        assert exc_info.value.key == "--config"


INVALID_SAMPLES = {"bad_marker", "unknown_key"}


def document_of(loaded) -> dict:
    """Loaded configuration written back out as a config document."""
    return {
        **loaded.network.model_dump(mode="json"),
        **loaded.experiments.model_dump(mode="json", exclude_none=True),
    }


@pytest.fixture(scope="module")
def config_validator(schemas_path):
    with open(schemas_path / "config.schema.json", encoding="utf-8") as handle:
        return Draft202012Validator(json.load(handle))


@pytest.mark.unit
class TestConfigSchema:

    @pytest.mark.parametrize("name", [
        "default", "only_b", "only_c", "detuned_bs1", "detuned_bs3",
        "weak_markers", "small_accounting", "small_spectrum",
    ])
    def test_loadable_samples_match_the_schema(self, config_validator, sample_configs, name):
        config_validator.validate(sample_configs[name])
        loaded = parse_config(json.dumps(sample_configs[name]))
        document = document_of(loaded)
        config_validator.validate(document)
        assert parse_config(json.dumps(document)) == loaded

    @pytest.mark.parametrize("name", sorted(INVALID_SAMPLES))
    def test_rejected_samples_fail_the_schema_too(self, config_validator, sample_configs, name):
        assert not config_validator.is_valid(sample_configs[name])
        with pytest.raises(ConfigurationError):
            parse_config(json.dumps(sample_configs[name]))

    def test_every_sample_is_classified(self, sample_configs):
        assert INVALID_SAMPLES <= set(sample_configs)
        assert len(sample_configs) == 10
