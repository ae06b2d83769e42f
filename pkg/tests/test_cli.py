import json
import math

import pytest

from dualgeo.cli import LoadedManifold, LoadedProduct, SpecFileError, load_spec, main


def write(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


MANIFOLD_DOC = {
    "name": "plane",
    "coords": ["x", "y"],
    "domain": [[-1.0, 1.0], [-1.0, 1.0]],
    "metric": [["1", "0"], ["0", "1"]],
}


class TestLoadSpec:
    def test_manifold_file(self, spec_dir):
        loaded = load_spec(str(spec_dir / "sphere2.json"))
        assert isinstance(loaded, LoadedManifold)
        assert loaded.manifold.dim == 2
        assert loaded.connection.provenance == "levi-civita"

    def test_product_file_with_paths(self, spec_dir):
        loaded = load_spec(str(spec_dir / "warped_sphere.json"))
        assert isinstance(loaded, LoadedProduct)
        assert loaded.product.classification == "warped"
        assert loaded.product.n == 3

    def test_inline_product_classified(self, spec_dir):
        loaded = load_spec(str(spec_dir / "twisted_xu.json"))
        assert loaded.product.classification == "proper-twisted"

    def test_declared_pair(self, spec_dir):
        loaded = load_spec(str(spec_dir / "line_pair.json"))
        assert loaded.dual_connection is not None
        assert loaded.dual_connection.gamma_at([0.0])[0, 0, 0] == -0.7

    def test_missing_file(self, tmp_path):
        with pytest.raises(SpecFileError, match="does not exist"):
            load_spec(str(tmp_path / "nope.json"))

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(SpecFileError, match="invalid JSON"):
            load_spec(str(path))

    def test_missing_field(self, tmp_path):
        doc = dict(MANIFOLD_DOC)
        del doc["metric"]
        with pytest.raises(SpecFileError, match="missing required field"):
            load_spec(write(tmp_path, "m.json", doc))

    def test_non_symmetric_metric_rejected(self, tmp_path):
        doc = dict(MANIFOLD_DOC)
        doc["metric"] = [["1", "0.1"], ["0", "1"]]
        with pytest.raises(SpecFileError, match="asymmetric"):
            load_spec(write(tmp_path, "m.json", doc))

    def test_expression_error_reported_with_location(self, tmp_path):
        doc = dict(MANIFOLD_DOC)
        doc["metric"] = [["1", "0"], ["0", "1 +* y"]]
        with pytest.raises(SpecFileError, match="position"):
            load_spec(write(tmp_path, "m.json", doc))

    def test_bad_gamma_key(self, tmp_path):
        doc = dict(MANIFOLD_DOC)
        doc["connection"] = {"kind": "explicit", "gamma": {"0;0;0": "1"}}
        with pytest.raises(SpecFileError, match="k,i,j"):
            load_spec(write(tmp_path, "m.json", doc))

    def test_unknown_connection_kind(self, tmp_path):
        doc = dict(MANIFOLD_DOC)
        doc["connection"] = {"kind": "mystery"}
        with pytest.raises(SpecFileError, match="unknown connection kind"):
            load_spec(write(tmp_path, "m.json", doc))


class TestExitCodes:
    def test_check_passes(self, spec_dir):
        assert main(["check", str(spec_dir / "sphere2.json"), "--samples", "16"]) == 0

    def test_fisher_metric_pair_is_statistical(self, spec_dir, capsys):
        code = main(["check", str(spec_dir / "fisher_normal.json"), "--samples", "16"])
        assert code == 0
        assert "statistical=True" in capsys.readouterr().out

    def test_check_fails_on_bad_pair(self, spec_dir, capsys):
        code = main(["check", str(spec_dir / "line_bad_pair.json"), "--samples", "8"])
        assert code == 1
        out = capsys.readouterr().out
        assert "1.4000e+00" in out and "fail" in out

    def test_missing_file_is_usage_error(self, tmp_path, capsys):
        assert main(["check", str(tmp_path / "nope.json")]) == 2
        assert "error:" in capsys.readouterr().err

    def test_weyl_on_surface_is_usage_error(self, spec_dir, capsys):
        code = main(["curvature", str(spec_dir / "sphere2.json"), "--weyl"])
        assert code == 2
        assert "dim >= 3" in capsys.readouterr().err

    def test_wrong_spec_kind(self, spec_dir):
        assert main(["flatness", str(spec_dir / "sphere2.json")]) == 2

    def test_bad_point_flag(self, spec_dir):
        assert main(["curvature", str(spec_dir / "sphere2.json"),
                     "--point", "1.0,abc"]) == 2

    def test_unknown_command_usage_error(self, capsys):
        with pytest.raises(SystemExit) as err:
            main(["frobnicate"])
        assert err.value.code == 2


class TestCurvatureCommand:
    def test_sphere_scalar(self, spec_dir, capsys, tmp_path):
        report = tmp_path / "curv.json"
        code = main(["curvature", str(spec_dir / "sphere2.json"),
                     "--point", f"{math.pi / 3},1.0", "--report", str(report)])
        assert code == 0
        out = capsys.readouterr().out
        assert "scalar = 2" in out
        payload = json.loads(report.read_text())
        assert payload["scalar"] == pytest.approx(2.0, abs=1e-10)
        assert payload["weyl"] is None

    def test_flat_space_zeros(self, tmp_path, capsys):
        doc = {
            "name": "euclid3",
            "coords": ["x", "y", "z"],
            "domain": [[-1, 1]] * 3,
            "metric": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]],
        }
        code = main(["curvature", write(tmp_path, "e3.json", doc), "--weyl"])
        assert code == 0
        out = capsys.readouterr().out
        assert "flat at point: True" in out


class TestConjugateCommand:
    def test_prints_negated_constant(self, spec_dir, capsys):
        assert main(["conjugate", str(spec_dir / "line_pair.json")]) == 0
        out = capsys.readouterr().out
        assert "Gamma*^0_00 = -0.7" in out


class TestTwistCommand:
    def test_product_file(self, spec_dir, tmp_path):
        report = tmp_path / "twist.json"
        code = main(["twist", str(spec_dir / "twisted_xu.json"),
                     "--samples", "8", "--report", str(report)])
        assert code == 0
        payload = json.loads(report.read_text())
        ids = {c["check_id"]: c for c in payload["checks"]}
        assert ids["block-levi-civita"]["status"] == "pass"
        assert ids["curvature-block R(U,V)X"]["max_residual"] < 1e-7
        # both fiber-block pairings are reported
        assert "as-printed" in ids["curvature-block R(U,V)W variants"]["notes"]
        assert "index-consistent" in ids["curvature-block R(U,V)W variants"]["notes"]

    def test_base_fiber_flags(self, spec_dir, tmp_path):
        report = tmp_path / "warped.json"
        code = main(["twist", "--base", str(spec_dir / "line.json"),
                     "--fiber", str(spec_dir / "sphere2.json"),
                     "--twist", "exp(x)", "--samples", "8",
                     "--report", str(report)])
        assert code == 0
        payload = json.loads(report.read_text())
        for check in payload["checks"]:
            if check["check_id"].startswith("curvature-block R(") \
                    and check["max_residual"] is not None:
                assert check["max_residual"] < 1e-8

    def test_direct_classification(self, spec_dir, capsys):
        code = main(["twist", "--base", str(spec_dir / "line.json"),
                     "--fiber", str(spec_dir / "sphere2.json"),
                     "--twist", "1", "--samples", "8"])
        assert code == 0
        out = capsys.readouterr().out
        assert "note: direct" in out
        assert "mixed flat: True" in out

    def test_coordinate_clash_is_usage_error(self, spec_dir, capsys):
        code = main(["twist", "--base", str(spec_dir / "line.json"),
                     "--fiber", str(spec_dir / "hyperbolic2.json"), "--twist", "1"])
        assert code == 2
        assert "clash" in capsys.readouterr().err

    def test_missing_arguments(self, capsys):
        assert main(["twist"]) == 2
        assert "provide a product spec" in capsys.readouterr().err


class TestFlatnessCommand:
    def test_flat_fixture(self, spec_dir, capsys):
        code = main(["flatness", str(spec_dir / "flat_dual_product.json"),
                     "--samples", "16"])
        assert code == 0
        out = capsys.readouterr().out
        assert "dually flat: True" in out

    def test_curved_base_identified(self, spec_dir, tmp_path, capsys):
        doc = {
            "kind": "twisted_product",
            "base": "sphere2.json",
            "fiber": "line.json",
            "twist": "1",
        }
        # place next to the referenced factor files
        path = spec_dir / "_tmp_sphere_base.json"
        path.write_text(json.dumps(doc))
        try:
            code = main(["flatness", str(path), "--samples", "12"])
            out = capsys.readouterr().out
            assert code == 0
            assert "dually flat: False" in out
            assert "failing factors: base 'sphere2'" in out
        finally:
            path.unlink()


class TestVerifyPaper:
    def test_full_suite_passes(self, tmp_path, capsys):
        report = tmp_path / "verify.json"
        code = main(["verify-paper", "--samples", "24", "--report", str(report)])
        assert code == 0
        payload = json.loads(report.read_text())
        assert payload["overall"] == "pass"
        statuses = {c["check_id"]: c["status"] for c in payload["checks"]}
        assert statuses["curvature-block R(U,V)W as-printed"] == "info"
        assert statuses["mixed-ricci-sign"] == "info"

    def test_reports_byte_identical(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        assert main(["verify-paper", "--samples", "16", "--report", str(a)]) == 0
        assert main(["verify-paper", "--samples", "16", "--report", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_seed_changes_points_not_verdicts(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        main(["verify-paper", "--samples", "16", "--report", str(a)])
        main(["verify-paper", "--samples", "16", "--seed", "7", "--report", str(b)])
        pa = json.loads(a.read_text())
        pb = json.loads(b.read_text())
        assert a.read_bytes() != b.read_bytes()
        assert [c["status"] for c in pa["checks"]] == [c["status"] for c in pb["checks"]]

    def test_impossible_tolerance_fails_honestly(self, tmp_path, capsys):
        code = main(["verify-paper", "--samples", "8", "--tol-exact", "1e-18"])
        assert code == 1
        assert "fail" in capsys.readouterr().out
