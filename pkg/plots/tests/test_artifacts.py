"""Run-directory parsing and schema validation."""

import numpy as np
import pytest

from floeplot.artifacts import (RunArtifacts, SchemaError, load_run,
                                nearest_snapshot, read_diagnostics)


class TestLoadRun:
    def test_particle_run(self, tiny_particle_run):
        art = load_run(tiny_particle_run)
        assert art.diagnostics["t"].size == 51
        assert np.all(np.diff(art.diagnostics["t"]) > 0)
        assert len(art.snapshots) == 6          # steps 0,10,...,40 + final
        assert art.snapshots[0].x.shape == (12, 2)
        assert not art.particle_grids and not art.hydro_grids

    def test_compare_run(self, tiny_compare_run):
        art = load_run(tiny_compare_run)
        assert sorted(art.particle_grids) == [0.0, 0.1, 0.2]
        assert sorted(art.hydro_grids) == [0.0, 0.1, 0.2]
        assert art.particle_grids[0.1].shape == (12, 12)

    def test_nearest_snapshot(self, tiny_particle_run):
        art = load_run(tiny_particle_run)
        assert nearest_snapshot(art, 0.0).t == 0.0
        assert nearest_snapshot(art, 1e9).t == art.snapshots[-1].t

    def test_missing_directory(self, tmp_path):
        with pytest.raises(SchemaError):
            load_run(tmp_path / "nothing_here")


class TestSchemaValidation:
    def test_missing_header(self, tmp_path):
        bad = tmp_path / "diagnostics.csv"
        bad.write_text("t,M0\n0,1\n", encoding="utf-8")
        with pytest.raises(SchemaError):
            read_diagnostics(bad)

    def test_empty_table(self, tmp_path):
        bad = tmp_path / "diagnostics.csv"
        bad.write_text("# floeflow-v1 diagnostics\n"
                       + ",".join(["t", "M0", "M1x", "M1y", "M2v", "M2x", "M2",
                                   "mom_res_x", "mom_res_y", "energy_res",
                                   "velocity_mismatch", "n_contacts"]) + "\n",
                       encoding="utf-8")
        with pytest.raises(SchemaError):
            read_diagnostics(bad)

    def test_non_monotone_time(self, tmp_path):
        cols = ",".join(["t", "M0", "M1x", "M1y", "M2v", "M2x", "M2",
                         "mom_res_x", "mom_res_y", "energy_res",
                         "velocity_mismatch", "n_contacts"])
        row = ",".join(["0"] * 12)
        bad = tmp_path / "diagnostics.csv"
        bad.write_text(f"# floeflow-v1 diagnostics\n{cols}\n{row}\n{row}\n",
                       encoding="utf-8")
        with pytest.raises(SchemaError):
            read_diagnostics(bad)
