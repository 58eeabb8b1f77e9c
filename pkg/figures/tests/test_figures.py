import math

import pytest

from wwfigures import (
    conservation,
    dispersion,
    lifespan_loglog,
    mode_exchange,
    resonance_atlas,
)

DISPERSION_CSV = "xi,omega\n" + "".join(
    f"{x/10.0},{math.sqrt((x/10.0)**3 + x/10.0):.12g}\n" for x in range(0, 51)
)

ATLAS_CSV = "kappa_over_g,depth,count\n" + "".join(
    f"{k/10.0},{h},{(1 if abs(k/10.0 - 0.5) < 0.04 else 0)}\n"
    for k in range(1, 11)
    for h in (1.0, 2.0, 4.0)
)

CONSERVATION_CSV = (
    "t,H2,H3,momentum,sobolev_s_norm,equiv_norm\n"
    + "".join(f"{t},1.0,0.25,0.125,3.0,3.0\n" for t in range(0, 11))
)

LIFESPAN_CSV = (
    "epsilon,T_eps,censored_flag,fit_p,fit_logc\n"
    "0.08,312.5,0,1.95,1.2\n"
    "0.04,1250.0,0,1.95,1.2\n"
    "0.02,5000.0,1,1.95,1.2\n"
)

MODES_CSV = "t,mode_amp_1,mode_amp_2\n" + "".join(
    f"{t},{1.0 - 0.01 * t},{0.5 + 0.01 * t}\n" for t in range(0, 21)
)

CASES = [
    (dispersion, DISPERSION_CSV, "xi"),
    (resonance_atlas, ATLAS_CSV, "count"),
    (conservation, CONSERVATION_CSV, "t"),
    (lifespan_loglog, LIFESPAN_CSV, "T_eps"),
    (mode_exchange, MODES_CSV, "t"),
]


@pytest.mark.parametrize("module,csv_text,_", CASES, ids=[m.__name__ for m, _, _ in CASES])
def test_render_deterministic(tmp_path, module, csv_text, _):
    src = tmp_path / "input.csv"
    src.write_text(csv_text)
    out1 = tmp_path / "fig1.svg"
    out2 = tmp_path / "fig2.svg"
    for out in (out1, out2):
        rc = module.main(["--input", str(src), "--output", str(out), "--title", "t"])
        assert rc == 0
    data1, data2 = out1.read_bytes(), out2.read_bytes()
    assert data1[:5] == b"<?xml"
    assert data1 == data2  # byte-identical rerun
    assert b"dc:date" not in data1  # no timestamps embedded


@pytest.mark.parametrize("module,csv_text,column", CASES, ids=[m.__name__ for m, _, _ in CASES])
def test_schema_mismatch_exits_nonzero(tmp_path, module, csv_text, column):
    header, rest = csv_text.split("\n", 1)
    cols = header.split(",")
    cols.remove(column)
    broken_rows = []
    for line in rest.splitlines():
        vals = line.split(",")
        del vals[header.split(",").index(column)]
        broken_rows.append(",".join(vals))
    src = tmp_path / "broken.csv"
    src.write_text(",".join(cols) + "\n" + "\n".join(broken_rows) + "\n")
    out = tmp_path / "fig.svg"
    with pytest.raises(SystemExit) as err:
        module.main(["--input", str(src), "--output", str(out)])
    assert err.value.code not in (0, None)
    assert column in str(err.value.code) or isinstance(err.value.code, str)


def test_lifespan_overlays_reference_slope(tmp_path):
    src = tmp_path / "lifespan.csv"
    src.write_text(LIFESPAN_CSV)
    out = tmp_path / "fig.svg"
    assert lifespan_loglog.main(["--input", str(src), "--output", str(out)]) == 0
    svg = out.read_text()
    assert "slope -2" in svg
    assert "fit: slope -1.95" in svg


def test_missing_file_exits_nonzero(tmp_path):
    with pytest.raises(SystemExit) as err:
        dispersion.main(
            ["--input", str(tmp_path / "nope.csv"), "--output", str(tmp_path / "o.svg")]
        )
    assert err.value.code not in (0, None)
