import pytest

from sheafwork.core.errors import AmbientMismatch, UnknownName, UnknownPoint
from sheafwork.core.pipeline import COMMANDS
from sheafwork.exactalg import GroupInvariants
from sheafwork.workspace import corpus


class TestLookup:
    """Names resolve to corpus objects."""

    def test_spaces(self):
        for name in corpus.SPACE_NAMES:
            assert corpus.space(name).name == name
        assert corpus.space("pseudocircle") is corpus.space("pseudocircle")

    def test_unknown_space(self):
        with pytest.raises(UnknownName) as excinfo:
            corpus.space("torus")
        assert "pseudocircle" in excinfo.value.details["known"]

    def test_sheaves(self, pseudocircle):
        assert corpus.sheaf(pseudocircle, "constZ2").stalk("a").invariants == GroupInvariants(0, (2,))
        assert corpus.sheaf(pseudocircle, "zero").is_zero()
        assert corpus.sheaf(pseudocircle, "C1:constZ").stalk("c").invariants == GroupInvariants(2, ())

    def test_skyscraper_at_unknown_point(self, pseudocircle):
        with pytest.raises(UnknownPoint):
            corpus.sheaf(pseudocircle, "skyscraper:z")

    def test_unknown_sheaf(self, pseudocircle):
        with pytest.raises(UnknownName):
            corpus.sheaf(pseudocircle, "constQ")

    def test_resolution_on_wrong_space(self, sierpinski):
        with pytest.raises(AmbientMismatch):
            corpus.sheaf_complex(sierpinski, "pseudocircle_skyscrapers")

    def test_unknown_double_complex(self):
        with pytest.raises(UnknownName):
            corpus.double_complex("triangle")

    def test_resolver_rejects_other_kinds(self):
        with pytest.raises(UnknownName):
            corpus.resolver("double_complex", "one_row", None)


class TestEntries:
    """The runnable examples behind ``sheafwork corpus run``."""

    def test_names_are_unique(self):
        names = [e.name for e in corpus.ENTRIES]
        assert len(names) == len(set(names))

    def test_commands_exist(self):
        assert {e.command for e in corpus.ENTRIES} <= set(COMMANDS)

    def test_entry(self):
        circle = corpus.entry("circle")
        assert circle.command == "cohomology"
        assert circle.args["space"] == "pseudocircle"
        with pytest.raises(UnknownName):
            corpus.entry("torus")

    def test_every_double_complex_on_both_axes(self):
        ss = {e.name for e in corpus.ENTRIES if e.command == "ss"}
        assert ss == {f"ss/{K}/{a}" for K in corpus.DOUBLE_NAMES for a in ("p", "q")}

    def test_export_items(self):
        stems = [stem for stem, _ in corpus.export_items()]
        assert len(stems) == len(set(stems))
        assert "space_pseudocircle" in stems
        assert "resolution_pseudocircle_nonacyclic" in stems
