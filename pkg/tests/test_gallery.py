import dataclasses
import json

import pytest

from netsheaf.gallery import (
    GalleryEntry,
    builtin_gallery,
    gallery_names,
    run_gallery,
)

ENTRIES = {e.name: e for e in builtin_gallery()}


def test_names_unique():
    names = gallery_names()
    assert len(names) == len(set(names)) == 31


@pytest.mark.parametrize("name", sorted(ENTRIES))
def test_entry_passes(name):
    report = run_gallery([ENTRIES[name]])
    (r,) = report.results
    assert r.passed, r.mismatches or r.error
    assert r.source


def test_cubic_entry_one():
    r = run_gallery([ENTRIES["cubic_staircase_1"]]).results[0]
    assert r.computed["holonomy"] == (2, 2, 2)
    assert r.computed["trivial"] is False and r.computed["gcd"] == 2


def test_klein_transports():
    c = run_gallery([ENTRIES["klein"]]).results[0].computed
    assert c["transport_ab"] == (0, -1) and c["transport_ba"] == (2, -1)


def test_zigzag_parity():
    c4 = run_gallery([ENTRIES["zigzag_4"]]).results[0].computed
    c5 = run_gallery([ENTRIES["zigzag_5"]]).results[0].computed
    assert c4["trivial"] is True and c5["trivial"] is False


def test_corrupted_expected_value_fails_only_that_entry():
    entries = [ENTRIES["penrose_staircase"], ENTRIES["klein"], ENTRIES["mobius"]]
    bad_expected = dict(entries[1].expected, transport_ba=(3, -1))
    entries[1] = dataclasses.replace(entries[1], expected=bad_expected)
    report = run_gallery(entries)
    assert not report.ok
    assert [r.name for r in report.failures] == ["klein"]
    (m,) = report.failures[0].mismatches
    assert m["key"] == "transport_ba" and m["computed"] == (2, -1)


def test_missing_key_is_a_mismatch():
    e = dataclasses.replace(ENTRIES["mobius"], expected={"no_such_key": 1})
    r = run_gallery([e]).results[0]
    assert not r.passed and r.mismatches[0]["computed"] == "<missing>"


def test_exception_becomes_failure():
    def boom():
        raise ValueError("kaboom")

    r = run_gallery([GalleryEntry("boom", boom, {"x": 1}, "test")]).results[0]
    assert not r.passed and "kaboom" in r.error


def test_empty_gallery():
    report = run_gallery([])
    assert report.ok and report.results == [] and report.failures == []


def test_records_are_json():
    for r in run_gallery(builtin_gallery()).results:
        json.dumps(r.as_dict())
