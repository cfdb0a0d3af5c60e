from gfixpoint.fixtures import KNOWN_DISCREPANCIES, Finding, format_table, reproduce_all


def test_refuted_claims_are_exactly_the_documented_ones():
    findings = reproduce_all()
    refuted = {(f.example, f.claim) for f in findings if not f.agrees}
    assert refuted == KNOWN_DISCREPANCIES
    assert all(f.verdict != "UNEXPECTED" for f in findings)


def test_fixed_point_claims_confirmed():
    confirmed = [f for f in reproduce_all() if "fixed point" in f.claim and f.agrees]
    assert len(confirmed) >= 3


def test_unlisted_refutation_is_unexpected():
    assert Finding("x", "y", True, False).verdict == "UNEXPECTED"
    text = format_table([Finding("x", "y", True, False, "why")])
    assert "UNEXPECTED" in text and "why" in text
