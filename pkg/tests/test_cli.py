"""Command-line driver: every subcommand against the shipped scene files."""

from pathlib import Path

import pytest

from hypershade.cli import main
from hypershade.expr import parse_expression
from hypershade.poly import to_text
from hypershade.scenefile import load_scene

SCENES = Path("scenes")
ALL_SCENES = sorted(SCENES.glob("*.scene"))


def run(*argv):
    return main([str(a) for a in argv])


def test_every_fixture_scene_parses():
    assert [p.name for p in ALL_SCENES] == [
        "bakery3d.scene", "hypermoon.scene", "hyperquadrics.scene",
        "hyperring.scene"]
    for path in ALL_SCENES:
        scene = load_scene(path)
        assert scene.surfaces()
        assert scene.lights


def test_scene_polynomials_survive_print_and_reparse():
    for path in ALL_SCENES:
        scene = load_scene(path)
        for s in scene.surfaces():
            text = to_text(s.poly)
            assert parse_expression(text, s.poly.space) == s.poly


def test_polar_prints_goldens(capsys):
    assert run("polar", "--scene", SCENES / "bakery3d.scene") == 0
    out = capsys.readouterr().out
    assert "S1_polar: 2*x - 2*y - 5*z + 19 = 0" in out
    assert "S3_polar: 16*x + y - 48*z - 131 = 0" in out
    assert "P_polar: 24*x + 4*y - 25*z - 708 = 0" in out


def test_polar_writes_files(tmp_path):
    assert run("polar", "--scene", SCENES / "bakery3d.scene",
               "--out", tmp_path) == 0
    names = {p.name for p in tmp_path.iterdir()}
    assert names == {"polar_S1.txt", "polar_S2.txt", "polar_S3.txt",
                     "polar_P.txt"}
    assert "= 0" in (tmp_path / "polar_S1.txt").read_text()


def test_terminator_reports_bounds(tmp_path, capsys):
    assert run("terminator", "--scene", SCENES / "bakery3d.scene",
               "--out", tmp_path) == 0
    out = capsys.readouterr().out
    assert "56" in out  # scene-level degree bound
    torus_file = (tmp_path / "terminator_S2.txt").read_text()
    assert "bound 12" in torus_file


def test_cone_sphere_golden(tmp_path, capsys):
    scene = tmp_path / "orb.scene"
    scene.write_text("""
[variables]
x y z

[surfaces]
S factor = x^2 + y^2 + z^2 - 1

[lights]
L = [0, 0, 2]
""")
    assert run("cone", "--scene", scene) == 0
    out = capsys.readouterr().out
    assert "3*x^2 + 3*y^2 - z^2 + 4*z - 4 = 0" in out


def test_project_emits_all_image_surfaces(tmp_path, capsys):
    assert run("project", "--scene", SCENES / "hyperquadrics.scene",
               "--out", tmp_path) == 0
    names = {p.name for p in tmp_path.iterdir()}
    assert {"project_S.txt", "project_P.txt"} <= names
    body = (tmp_path / "project_S.txt").read_text()
    assert "S_contour:" in body and "S_terminator:" in body


def test_project_skips_degenerate_hyperplane(capsys):
    assert run("project", "--scene", SCENES / "hyperring.scene") == 0
    out = capsys.readouterr().out
    assert "S_contour:" in out
    assert "skipped" in out  # the w+2 wall has no proper contour


def test_project_rejects_three_var_scene(capsys):
    assert run("project", "--scene", SCENES / "bakery3d.scene") != 0


def test_shadow_three_var_writes_boundary_systems(tmp_path, capsys):
    scene = tmp_path / "drop.scene"
    scene.write_text("""
[variables]
x y z

[surfaces]
S factor   = x^2 + y^2 + (z - 2)^2 - 1
F receiver = z

[lights]
L = [0, 0, 6]
""")
    out_dir = tmp_path / "out"
    assert run("shadow", "--scene", scene, "--out", out_dir) == 0
    names = {p.name for p in out_dir.iterdir()}
    assert "shadow_S_on_F.txt" in names
    body = (out_dir / "shadow_S_on_F.txt").read_text()
    assert body.count("= 0") == 2  # receiver plane + tangent cone pair


def test_classify_named_points(tmp_path, capsys):
    pts = tmp_path / "pts.txt"
    pts.write_text("T -24/25 -18/25 -3/5\nT 3 0 0\n")
    scene = tmp_path / "ring.scene"
    scene.write_text("""
[variables]
x y z

[surfaces]
T factor = (x^2 + y^2 + z^2 + 3)^2 - 16*x^2 - 16*y^2

[lights]
L = [8, 0, 2]
""")
    assert run("classify", "--scene", scene, "--points", pts) == 0
    out = capsys.readouterr().out.splitlines()
    assert any("Occluded" in l for l in out)
    assert any("Illuminated" in l for l in out)


def test_classify_off_surface_point_fails(tmp_path, capsys):
    pts = tmp_path / "pts.txt"
    pts.write_text("S1 0 0 0\n")
    assert run("classify", "--scene", SCENES / "bakery3d.scene",
               "--points", pts) == 1
    assert "error" in capsys.readouterr().out.lower()


def test_classify_unknown_surface_name(tmp_path):
    pts = tmp_path / "pts.txt"
    pts.write_text("NOPE 0 0 0\n")
    assert run("classify", "--scene", SCENES / "bakery3d.scene",
               "--points", pts) == 2


def test_mesh_exports_classified_surfaces(tmp_path, capsys):
    scene = tmp_path / "orb.scene"
    scene.write_text("""
[variables]
x y z

[surfaces]
S factor = x^2 + y^2 + z^2 - 1

[lights]
L = [0, 0, 3]

[grid]
box = [-2, 2] [-2, 2] [-2, 2]
resolution = 24
""")
    out_dir = tmp_path / "meshes"
    assert run("mesh", "--scene", scene, "--out", out_dir) == 0
    out = capsys.readouterr().out
    assert "watertight" in out
    files = sorted(p.name for p in out_dir.iterdir())
    assert files == ["orb_S.obj"]


def test_frame_writes_hypercube(tmp_path, capsys):
    out_dir = tmp_path / "frame"
    assert run("frame", "--scene", SCENES / "hyperquadrics.scene",
               "--out", out_dir) == 0
    files = list(out_dir.iterdir())
    assert len(files) == 1
    lines = files[0].read_text().splitlines()
    assert sum(1 for l in lines if l.startswith("v ")) == 16
    assert sum(1 for l in lines if l.startswith("l ")) == 32


def test_bench_table_schema(tmp_path, capsys):
    out_dir = tmp_path / "bench"
    assert run("bench", "--scene", SCENES / "hyperquadrics.scene",
               "--backend", "auto", "--budget", "120", "--out", out_dir) == 0
    out = capsys.readouterr().out
    header, *rows = [l for l in out.splitlines() if l.strip()]
    assert "object" in header and "deg" in header and "auto" in header
    assert any("shadow" in r for r in rows)
    tsv = (out_dir / "bench.tsv").read_text().splitlines()
    assert tsv[0].split("\t")[:3] == ["object", "kind", "degree"]
    assert len(tsv) > 4


def test_missing_scene_exits_2(capsys):
    assert run("polar", "--scene", "scenes/ghost.scene") == 2


def test_malformed_scene_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.scene"
    bad.write_text("[surfaces]\nS factor = x^2 +\n")
    assert run("polar", "--scene", bad) == 2
