from pathlib import Path

import pytest

from quivrep import dsl
from quivrep.errors import CounitLawFails, DslSyntaxError, DuplicateName, NotCommutingLink, UnresolvedReference
from quivrep.exactlin import Field, Matrix

DATA = Path(__file__).resolve().parent.parent / "data"


def failure(text):
    with pytest.raises(dsl.ParseFailure) as info:
        dsl.parse_string(text, "t.qr")
    return info.value.errors


def test_example_bundle_parses_cleanly():
    ws = dsl.parse([DATA / "two_level.qr"])
    assert ws.names("quiver") == ["Q", "Qp"]
    assert ws.names("representation") == ["Mp", "M"]
    assert ws.names("nrep") == ["Mbar", "Nbar"]
    assert ws.nrep("Nbar").link(2, "a", "b3") == Matrix.identity(1)


def test_morphism_failure_is_located():
    ws = dsl.parse([DATA / "two_level.qr"])
    with pytest.raises(NotCommutingLink) as info:
        ws.morphism("idid")
    loc = info.value.location
    assert Path(loc.file).name == "two_level.qr" and loc.line == 42


def test_empty_file_set():
    ws = dsl.parse([])
    assert ws.order == []


def test_forward_reference_resolves():
    ws = dsl.parse_string("""
nrep V over (A, B) field Q
component 1 = a
component 2 = b

representation a over A field Q
space x dim 1
representation b over B field Q
space y dim 1
quiver A
vertex x
quiver B
vertex y
""")
    assert ws.nrep("V").dim_vectors == ((1,), (1,))


def test_multi_file_forward_reference(tmp_path):
    (tmp_path / "one.qr").write_text("representation r over P field F5\nspace p dim 2\n")
    (tmp_path / "two.qr").write_text("quiver P\nvertex p\n")
    ws = dsl.parse([tmp_path / "one.qr", tmp_path / "two.qr"])
    assert ws.representation("r").field == Field.prime(5)


def test_syntax_error_position():
    errs = failure("quiver A\nvertex x y\narrow f : x => y\n")
    assert len(errs) == 1
    e = errs[0]
    assert isinstance(e, DslSyntaxError) and (e.line, e.col) == (3, 1)


def test_matrix_error_column():
    errs = failure("quiver A\nvertex x y\narrow f : x -> y\nrepresentation r over A field Q\nmap f = [[1, z]]\n")
    e = errs[0]
    assert (e.line, e.col) == (5, 14)


def test_unresolved_and_duplicate():
    errs = failure("quiver A\nvertex x\nquiver A\nvertex y\nrepresentation r over B field Q\n")
    kinds = sorted(type(e).__name__ for e in errs)
    assert kinds == ["DuplicateName", "UnresolvedReference"]
    dup = next(e for e in errs if isinstance(e, DuplicateName))
    assert dup.line == 3
    unres = next(e for e in errs if isinstance(e, UnresolvedReference))
    assert unres.line == 5


def test_statement_outside_declaration():
    errs = failure("vertex x\n")
    assert errs[0].line == 1


def test_multiline_matrix_and_comments():
    ws = dsl.parse_string("""
quiver A          # a single arrow
vertex x y
arrow f : x -> y
representation r over A field Q
space x dim 2
space y dim 2
map f = [[1, 2],   # first row
         [3, 4/6]]
""")
    assert ws.representation("r").mats["f"] == Matrix.from_rows([[1, 2], [3, "2/3"]])


def test_field_override():
    ws = dsl.parse([DATA / "two_level.qr"], field_override=Field.prime(3))
    assert ws.nrep("Mbar").field == Field.prime(3)


def test_shape_error_points_at_map_line():
    text = "quiver A\nvertex x y\narrow f : x -> y\nrepresentation r over A field Q\nspace x dim 1\nmap f = [[1], [2]]\n"
    ws = dsl.parse_string(text)
    with pytest.raises(Exception) as info:
        ws.representation("r")
    assert info.value.location.line == 6


def test_parse_print_parse_is_identity():
    for name in ("two_level.qr", "three_level.qr"):
        ws = dsl.parse([DATA / name])
        text = ws.canonical_text()
        again = dsl.parse_string(text).canonical_text()
        assert again == text


def test_printed_objects_reparse():
    ws = dsl.parse([DATA / "three_level.qr"])
    v = ws.nrep("Vunder")
    quivers = "".join(dsl.format_quiver(q) + "\n" for q in v.quivers)
    ws2 = dsl.parse_string(quivers + dsl.format_nrep(v, "W"))
    assert ws2.nrep("W") == v


def test_diagram_and_coalgebra_blocks():
    ws = dsl.parse_string("""
quiver A
vertex x
quiver pair
vertex s t
arrow f : s -> t
arrow g : s -> t
representation r over A field Q
space x dim 2
morphism id : r -> r
comp x = [[1, 0], [0, 1]]
morphism sw : r -> r
comp x = [[0, 1], [1, 0]]
diagram D shape pair
object s = r
object t = r
edge f = id
edge g = sw
representation u over A field Q
space x dim 1
coalgebra C on u
comult x = [[1]]
counit x = [[1]]
coalgebra Bad on u
comult x = [[2]]
counit x = [[1]]
""")
    d = ws.diagram("D")
    assert set(d.objects) == {"s", "t"}
    assert ws.coalgebra("C").carrier.dims == {"x": 1}
    with pytest.raises(CounitLawFails):
        ws.coalgebra("Bad")


def test_nrep_coalgebra_levels():
    text = (DATA / "two_level.qr").read_text() + """
representation U1 over Q field Q
space 1 dim 1
space 2 dim 1
map a = [[1]]
representation U2 over Qp field Q
space 1 dim 1
space 2 dim 1
space 3 dim 1
space 4 dim 1
map b1 = [[1]]
map b2 = [[1]]
map b3 = [[1]]
nrep U over (Q, Qp) field Q
component 1 = U1
component 2 = U2
link 2 a b1 = [[1]]
link 2 a b2 = [[1]]
link 2 a b3 = [[1]]
coalgebra CU on U
comult 1 1 = [[1]]
comult 1 2 = [[1]]
comult 2 1 = [[1]]
comult 2 2 = [[1]]
comult 2 3 = [[1]]
comult 2 4 = [[1]]
counit 1 1 = [[1]]
counit 1 2 = [[1]]
counit 2 1 = [[1]]
counit 2 2 = [[1]]
counit 2 3 = [[1]]
counit 2 4 = [[1]]
"""
    ws = dsl.parse_string(text)
    c = ws.coalgebra("CU")
    assert c.carrier.n == 2
