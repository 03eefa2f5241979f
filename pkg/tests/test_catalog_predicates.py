"""Unit tests for catalog.py and the predicates package.

The predicates are checked against every catalog entry they are
expected to decide, with the justification chain required on Yes/No.
"""
import json
import sys
import os

import pytest

# Add parent directory to path to import our modules
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from degree_lab.catalog import load_catalog, validate_catalog
from degree_lab.const import ANSWER_NO, ANSWER_UNKNOWN, ANSWER_YES, PI_NONZERO, PI_ZERO
from degree_lab.exceptions import ConfigurationError, InternalConsistencyError
from degree_lab.predicates import (
    PREDICATES,
    DegreeWellDefined,
    DegreeWellDefinedDim4,
    DegreeWellDefinedSobolev,
    HomotopyClassesDefined,
    HomotopyClassesDefinedSobolev,
    TheoremVerdict,
)


class TestCatalog:
    """Tests for loading and querying the shipped catalog."""

    def test_size_and_consistency(self, catalog):
        """Test all entries load and pass the covering checks."""
        assert len(catalog) == 23
        assert validate_catalog(catalog) == []

    def test_aliases(self, catalog):
        """Test alias lookup ignores case."""
        assert catalog.resolve("lens:m=5,dim=3").name == "lens_5"
        assert catalog.resolve("lens:m=5").name == "lens_5"
        assert catalog.resolve("CP2").name == "cp2"
        assert catalog.resolve("cp2").name == "cp2"
        assert "T2" in catalog

    def test_unknown_target(self, catalog):
        """Test unknown names raise a configuration error."""
        with pytest.raises(ConfigurationError):
            catalog.resolve("klein_bottle")

    def test_computed_betti(self, catalog):
        """Test Betti numbers come from the builders where present."""
        lens = catalog["lens_5"]
        assert lens.betti_computed
        assert lens.betti == (1, 0, 0, 1)
        assert lens.is_rhs
        assert not catalog["s2xs2"].betti_computed

    def test_pi_inherited_from_cover(self, catalog):
        """Test lens spaces read pi_n, n >= 2, off the 3-sphere."""
        lens = catalog["lens_5"]
        assert catalog.pi(lens, 3).status == PI_NONZERO
        assert catalog.pi(lens, 2).status == PI_ZERO
        assert "s3" in catalog.pi(lens, 3).source

    def test_pi_from_contractible_cover(self, catalog):
        """Test tori have vanishing higher homotopy groups."""
        assert catalog.pi(catalog["t3"], 2).is_zero

    def test_cover_of(self, catalog):
        """Test named, self and noncompact covers."""
        assert catalog.cover_of(catalog["poincare"]).name == "s3"
        assert catalog.cover_of(catalog["s2"]) is catalog["s2"]
        assert catalog.cover_of(catalog["t2"]) is None

    def test_to_dict(self, catalog):
        """Test the listing form of an entry."""
        data = catalog["lens_3"].to_dict()
        assert data["cover"] == "s3"
        assert data["sheets"] == 3
        assert data["homology"] == "computed"
        assert catalog["t2"].to_dict()["sheets"] == "infinite"

    def test_bad_file(self, tmp_path):
        """Test an unreadable document is a configuration error."""
        path = tmp_path / "catalog.json"
        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(ConfigurationError):
            load_catalog(path)

    def test_missing_file(self, tmp_path):
        """Test a missing file is a configuration error."""
        with pytest.raises(ConfigurationError):
            load_catalog(tmp_path / "none.json")

    def test_inconsistent_cover(self, tmp_path):
        """Test an even-dimensional entry with a sphere double cover fails the data checks."""
        entries = [
            {
                "name": "s2",
                "dimension": 2,
                "orientable": True,
                "homology": {"builder": "sphere", "params": {"n": 2}},
                "cover": {"kind": "self"},
                "sheets": 1,
            },
            {
                "name": "fake",
                "dimension": 2,
                "orientable": True,
                "homology": {"known": [1, 0, 1]},
                "cover": {"kind": "named", "entry": "s2"},
                "sheets": 2,
            },
        ]
        path = tmp_path / "catalog.json"
        path.write_text(json.dumps({"entries": entries}), encoding="utf-8")
        with pytest.raises(ConfigurationError) as err:
            load_catalog(path)
        assert "fake" in str(err.value)

    def test_invalid_entry(self, tmp_path):
        """Test entries missing required keys are rejected."""
        path = tmp_path / "catalog.json"
        path.write_text(json.dumps({"entries": [{"name": "x", "dimension": 2}]}), encoding="utf-8")
        with pytest.raises(ConfigurationError):
            load_catalog(path)


class TestDegreePredicate:
    """Tests for DegreeWellDefined."""

    @pytest.mark.parametrize(
        "name", ["s2", "s3", "s4", "lens_2", "lens_3", "lens_4", "lens_5", "lens_6", "lens_7", "rp3", "poincare"]
    )
    def test_no(self, catalog, name):
        """Test targets covered by a rational homology sphere answer No."""
        verdict = DegreeWellDefined(catalog)(name)
        assert verdict.answer == ANSWER_NO
        assert verdict.justification

    @pytest.mark.parametrize("name", ["cp2", "t2", "t3", "s2xs2", "g6"])
    def test_yes(self, catalog, name):
        """Test the remaining orientable targets answer Yes."""
        assert DegreeWellDefined(catalog)(name).answer == ANSWER_YES

    def test_g6_is_rhs_with_noncompact_cover(self, catalog):
        """Test g6 is a rational homology sphere yet the degree is well defined."""
        entry = catalog["g6"]
        assert entry.is_rhs
        verdict = DegreeWellDefined(catalog)(entry)
        assert verdict.answer == ANSWER_YES
        assert any("noncompact" in fact for fact in verdict.justification)

    def test_lens_justification_names_cover(self, catalog):
        """Test the verdict for a lens space cites its cover and homology."""
        verdict = DegreeWellDefined(catalog)("lens:m=5")
        text = " ".join(verdict.justification)
        assert "s3" in text
        assert "5 sheets" in text

    def test_non_orientable_unknown(self, catalog):
        """Test non-orientable targets are out of scope."""
        verdict = DegreeWellDefined(catalog)("rp2")
        assert verdict.answer == ANSWER_UNKNOWN
        assert verdict.notes


class TestDim4Predicate:
    """Tests for DegreeWellDefinedDim4."""

    def test_agrees_with_general(self, catalog):
        """Test the four-dimensional rule matches the general one on every orientable 4-manifold."""
        general = DegreeWellDefined(catalog)
        special = DegreeWellDefinedDim4(catalog)
        entries = [entry for entry in catalog.values() if entry.dimension == 4 and entry.orientable]
        assert entries
        for entry in entries:
            assert special(entry).answer == general(entry).answer, entry.name

    def test_s4(self, catalog):
        """Test S4 answers No."""
        assert DegreeWellDefinedDim4(catalog)("s4").answer == ANSWER_NO

    def test_other_dimension_unknown(self, catalog):
        """Test other dimensions answer Unknown."""
        assert DegreeWellDefinedDim4(catalog)("s3").answer == ANSWER_UNKNOWN


class TestHomotopyPredicate:
    """Tests for HomotopyClassesDefined."""

    def test_torus_yes(self, catalog):
        """Test pi_2(T2) = 0 answers Yes."""
        assert HomotopyClassesDefined(catalog)("t2", n=2).answer == ANSWER_YES

    def test_sphere_no(self, catalog):
        """Test pi_2(S2) != 0 with domain S2 answers No."""
        assert HomotopyClassesDefined(catalog)("s2", n=2).answer == ANSWER_NO

    def test_cp1_from_cp2_unknown(self, catalog):
        """Test pi_4(CP1) != 0 on the domain CP2 answers Unknown and carries the note."""
        verdict = HomotopyClassesDefined(catalog)("cp1", n=4, domain="cp2")
        assert verdict.answer == ANSWER_UNKNOWN
        assert any("homotopic" in note for note in verdict.notes)

    def test_domain_dimension_checked(self, catalog):
        """Test the domain must have dimension n."""
        with pytest.raises(ConfigurationError):
            HomotopyClassesDefined(catalog)("s2", n=3, domain="cp2")

    def test_n_positive(self, catalog):
        """Test n must be at least 1."""
        with pytest.raises(ConfigurationError):
            HomotopyClassesDefined(catalog)("s2", n=0)


class TestSobolevPredicates:
    """Tests for the W^{1,p} and H^{1,p} predicates."""

    def test_degree_torus_w(self, catalog):
        """Test T3 in W^{1,2.5}: pi_2 vanishes so the answer is Yes."""
        verdict = DegreeWellDefinedSobolev(catalog)("t3", p=2.5, space="W")
        assert verdict.answer == ANSWER_YES
        assert verdict.parameters == {"p": 2.5, "space": "W"}

    def test_degree_lens_w(self, catalog):
        """Test lens spaces answer No in W^{1,2}."""
        assert DegreeWellDefinedSobolev(catalog)("lens_5", p=2.0, space="W").answer == ANSWER_NO

    def test_degree_exponent_range(self, catalog):
        """Test p outside [n-1, n) is rejected."""
        with pytest.raises(ConfigurationError):
            DegreeWellDefinedSobolev(catalog)("t3", p=3.0, space="W")

    def test_degree_unknown_space(self, catalog):
        """Test only W and H are accepted."""
        with pytest.raises(ConfigurationError):
            DegreeWellDefinedSobolev(catalog)("t3", p=2.5, space="L")

    def test_homotopy_torus_w_unknown(self, catalog):
        """Test pi_1(T2) != 0 leaves the W case undecided."""
        verdict = HomotopyClassesDefinedSobolev(catalog)("t2", n=2, p=1.5, space="W")
        assert verdict.answer == ANSWER_UNKNOWN

    def test_homotopy_torus_h(self, catalog):
        """Test the H case follows the smooth predicate."""
        assert HomotopyClassesDefinedSobolev(catalog)("t2", n=2, p=1.5, space="H").answer == ANSWER_YES


class TestVerdicts:
    """Tests for TheoremVerdict and the registry."""

    def test_yes_needs_justification(self):
        """Test a Yes without facts is an internal error."""
        with pytest.raises(InternalConsistencyError):
            TheoremVerdict("degree", "s2", ANSWER_YES)

    def test_invalid_answer(self):
        """Test answers are Yes, No or Unknown."""
        with pytest.raises(InternalConsistencyError):
            TheoremVerdict("degree", "s2", "Maybe", ("fact",))

    def test_registry(self):
        """Test every predicate key is registered."""
        assert set(PREDICATES) == {"degree", "degree-dim4", "homotopy", "degree-sobolev", "homotopy-sobolev"}

    def test_to_dict(self, catalog):
        """Test the serialized verdict."""
        data = DegreeWellDefined(catalog)("lens_5").to_dict()
        assert data["answer"] == ANSWER_NO
        assert data["target"] == "lens_5"
        assert data["justification"]
