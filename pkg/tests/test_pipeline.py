import json
from collections import Counter

import pytest

from wordcamo.corpus import bundled_corpus
from wordcamo.levels import SeedPath, canonical_spec, derive_rng
from wordcamo.pipeline import (
    PERCENTS,
    CamouflagedInstance,
    DatasetError,
    Instance,
    IntegrityError,
    camouflage_instance,
    dynamic_view,
    entry_key,
    epoch_views,
    generate_suite,
    read_camouflaged,
    read_dataset,
    revert,
    select_instances,
    serialize_row,
    static_training_set,
    transform_dataset,
    write_dataset,
)


@pytest.fixture(scope="module")
def corpus():
    train, test = bundled_corpus(n_train=300, n_test=120)
    return train, test


def rng_for(seed, name="t", epoch=0):
    return derive_rng(SeedPath(seed, name, epoch))


class TestIngest:
    def write(self, tmp_path, lines):
        path = tmp_path / "d.jsonl"
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        return path

    def test_duplicate_texts_dropped(self, tmp_path):
        path = self.write(tmp_path, [
            '{"id": "1", "text": "same text here", "label": 0}',
            '{"id": "2", "text": "same text here", "label": 1}',
        ])
        out = read_dataset(path)
        assert len(out) == 1 and out[0].id == "1"

    def test_short_text_dropped(self, tmp_path):
        path = self.write(tmp_path, ['{"id": "1", "text": "ab", "label": 0}'])
        assert read_dataset(path) == []

    def test_case_preserved(self, tmp_path):
        path = self.write(tmp_path, ['{"id": "1", "text": "MiXeD CaSe TeXt"}'])
        assert read_dataset(path)[0].text == "MiXeD CaSe TeXt"

    def test_malformed_line_reports_lineno(self, tmp_path):
        path = self.write(tmp_path, ['{"id": "1", "text": "fine here"}', "{broken"])
        with pytest.raises(DatasetError, match=":2:"):
            read_dataset(path)

    def test_duplicate_ids_rejected(self, tmp_path):
        path = self.write(tmp_path, [
            '{"id": "1", "text": "first text"}',
            '{"id": "1", "text": "second text"}',
        ])
        with pytest.raises(DatasetError, match="duplicate id"):
            read_dataset(path)

    def test_sequential_ids_assigned(self, tmp_path):
        path = self.write(tmp_path, ['{"text": "first text"}', '{"text": "second text"}'])
        assert [i.id for i in read_dataset(path)] == ["0", "1"]

    def test_missing_label_rejected_when_required(self, tmp_path):
        path = self.write(tmp_path, ['{"id": "1", "text": "first text"}'])
        with pytest.raises(DatasetError, match="label"):
            read_dataset(path, require_label=True)


class TestCamouflageInstance:
    def test_single_content_word_gets_one_mod(self):
        inst = Instance(id="x", text="the quasar of the and", label=0)
        ci = camouflage_instance(inst, canonical_spec(1, "v1"), rng_for(3))
        assert ci.camo_applied
        assert len(ci.modifications) == 1
        assert ci.modifications[0].original == "quasar"

    def test_no_content_words(self):
        inst = Instance(id="x", text="the of a", label=0)
        ci = camouflage_instance(inst, canonical_spec(1, "v1"), rng_for(3))
        assert not ci.camo_applied
        assert ci.text == inst.text and ci.modifications == ()

    def test_determinism(self, corpus):
        _, test = corpus
        spec = canonical_spec(3, "v2")
        a = camouflage_instance(test[0], spec, rng_for(42, "d"))
        b = camouflage_instance(test[0], spec, rng_for(42, "d"))
        assert a.text == b.text and a.modifications == b.modifications

    def test_label_and_id_untouched(self, corpus):
        _, test = corpus
        spec = canonical_spec(2, "v2")
        for inst in test[:20]:
            ci = camouflage_instance(inst, spec, rng_for(1, inst.id))
            assert ci.label == inst.label and ci.id == inst.id

    def test_revert_sweep_1000(self):
        train, test = bundled_corpus(n_train=880, n_test=120)
        spec = canonical_spec(3, "v2")
        for i, inst in enumerate(train + test):
            ci = camouflage_instance(inst, spec, rng_for(i, "sweep"))
            assert revert(ci) == inst.text

    def test_containment_outside_spans(self, corpus):
        _, test = corpus
        spec = canonical_spec(3, "v2")
        for inst in test[:30]:
            ci = camouflage_instance(inst, spec, rng_for(9, inst.id))
            original = inst.text.encode("utf-8")
            camo = ci.text.encode("utf-8")
            # walk both byte strings, skipping recorded spans
            opos = cpos = 0
            for rec in sorted(ci.modifications, key=lambda r: r.start):
                assert original[opos : rec.start] == camo[cpos : cpos + rec.start - opos]
                cpos += rec.start - opos + len(rec.replacement.encode("utf-8"))
                opos = rec.end
            assert original[opos:] == camo[cpos:]


class TestSelectInstances:
    def test_examples(self):
        assert len(select_instances(860, 100, rng_for(1))) == 860
        assert len(select_instances(1000, 25, rng_for(1))) == 250
        assert len(select_instances(7, 10, rng_for(1))) == 1  # round(0.7) = 1

    def test_bounds_and_distinctness(self):
        chosen = select_instances(50, 50, rng_for(5))
        assert len(chosen) == 25
        assert all(0 <= i < 50 for i in chosen)

    def test_deterministic(self):
        assert select_instances(200, 25, rng_for(3, "s")) == select_instances(
            200, 25, rng_for(3, "s")
        )

    def test_invalid(self):
        with pytest.raises(ValueError):
            select_instances(0, 10, rng_for(1))
        with pytest.raises(ValueError):
            select_instances(10, 0, rng_for(1))


def half_up(x):
    import math

    return int(math.floor(x + 0.5))


@pytest.fixture(scope="module")
def suite(tmp_path_factory):
    _, test = bundled_corpus(n_train=10, n_test=150)
    outdir = tmp_path_factory.mktemp("suite")
    manifest = generate_suite(
        test, outdir, 99, source_path="test.jsonl", source_checksum="abc"
    )
    return test, outdir, manifest


class TestSuite:

    def test_manifest_covers_grid(self, suite):
        _, _, manifest = suite
        assert len(manifest.entries) == 30
        triples = {(e["level"], e["version"], e["percent"]) for e in manifest.entries}
        assert triples == {
            (lv, v, p) for lv in (1, 2, 3) for v in ("v1", "v2") for p in PERCENTS
        }
        assert manifest.original["key"] == "original"
        assert manifest.canonical_params

    def test_exact_camo_counts(self, suite):
        test, outdir, manifest = suite
        n = len(test)
        for entry in manifest.entries:
            rows = read_camouflaged(outdir / entry["path"])
            applied = sum(1 for r in rows if r.camo_applied)
            assert applied == half_up(entry["percent"] / 100 * n), entry["key"]

    def test_unselected_rows_byte_identical_to_source(self, suite):
        test, outdir, manifest = suite
        plain = {inst.id: serialize_row(inst) for inst in test}
        path = outdir / entry_key(2, "v1", 50)
        with open(f"{path}.jsonl", encoding="utf-8") as fh:
            for line in fh:
                rec = json.loads(line)
                if "camo" not in rec:
                    assert line.rstrip("\n") == plain[rec["id"]]

    def test_label_multiset_invariant(self, suite):
        test, outdir, manifest = suite
        source_labels = Counter(i.label for i in test)
        for entry in manifest.entries[:6]:
            rows = read_camouflaged(outdir / entry["path"])
            assert Counter(r.label for r in rows) == source_labels

    def test_regeneration_byte_identical(self, suite, tmp_path):
        test, _, manifest = suite
        again = generate_suite(test, tmp_path, 99, source_path="test.jsonl", source_checksum="abc")
        assert [e["checksum"] for e in again.entries] == [
            e["checksum"] for e in manifest.entries
        ]

    def test_collision_refused_without_force(self, suite):
        test, outdir, _ = suite
        with pytest.raises(DatasetError, match="already exist"):
            generate_suite(test, outdir, 99)
        generate_suite(test, outdir, 99, source_path="t", source_checksum="x", force=True)

    def test_revert_all_files(self, suite):
        test, outdir, manifest = suite
        original = {i.id: i.text for i in test}
        for entry in manifest.entries:
            for row in read_camouflaged(outdir / entry["path"]):
                assert revert(row) == original[row.id]

    def test_instance_transform_shared_across_percents(self, suite):
        _, outdir, _ = suite
        texts100 = {
            r.id: r.text for r in read_camouflaged(outdir / "l3.v1.p100.jsonl")
        }
        for row in read_camouflaged(outdir / "l3.v1.p25.jsonl"):
            if row.camo_applied:
                assert row.text == texts100[row.id]


class TestTrainingSets:
    def test_static_p100_all_applied(self, corpus):
        train, _ = corpus
        rows = static_training_set(train, 100, 5)
        assert all(r.camo_applied for r in rows)

    def test_level_histogram_uniform(self):
        train, _ = bundled_corpus(n_train=10_000, n_test=10)
        rows = static_training_set(train, 100, 11)
        counts = Counter(r.level for r in rows)
        for level in (1, 2, 3):
            assert counts[level] / len(rows) == pytest.approx(1 / 3, abs=0.02)
        versions = Counter(r.version for r in rows)
        assert versions["v1"] / len(rows) == pytest.approx(0.5, abs=0.02)

    def test_dynamic_epoch_deterministic(self, corpus):
        train, _ = corpus
        a = dynamic_view(train, 50, 7, epoch=3)
        b = dynamic_view(train, 50, 7, epoch=3)
        assert [r.text for r in a] == [r.text for r in b]

    def test_dynamic_epochs_differ(self):
        train, _ = bundled_corpus(n_train=1000, n_test=10)
        e0 = dynamic_view(train, 75, 7, epoch=0)
        e1 = dynamic_view(train, 75, 7, epoch=1)
        sel0 = {r.id for r in e0 if r.camo_applied}
        sel1 = {r.id for r in e1 if r.camo_applied}
        assert sel0 != sel1
        common = sel0 & sel1
        texts0 = {r.id: r.text for r in e0}
        texts1 = {r.id: r.text for r in e1}
        differing = sum(1 for i in common if texts0[i] != texts1[i])
        assert differing / len(common) >= 0.95

    def test_dynamic_count_constant_per_epoch(self, corpus):
        train, _ = corpus
        expected = round(0.25 * len(train))
        for epoch in range(4):
            rows = dynamic_view(train, 25, 7, epoch=epoch)
            assert sum(1 for r in rows if r.camo_applied) == expected

    def test_epoch_views_iterator_matches(self, corpus):
        train, _ = corpus
        it = epoch_views(train, 50, 13)
        for epoch in range(3):
            rows = next(it)
            direct = dynamic_view(train, 50, 13, epoch)
            assert [r.text for r in rows] == [r.text for r in direct]

    def test_static_and_dynamic_streams_independent(self, corpus):
        train, _ = corpus
        s = static_training_set(train, 100, 7)
        d = dynamic_view(train, 100, 7, epoch=0)
        assert [r.text for r in s] != [r.text for r in d]


class TestRevert:
    def test_no_mods_unchanged(self):
        inst = Instance(id="x", text="plain text stays", label=None)
        ci = CamouflagedInstance(base=inst, text=inst.text, camo_applied=False)
        assert revert(ci) == inst.text

    def test_integrity_error_names_instance(self, corpus):
        _, test = corpus
        ci = camouflage_instance(test[0], canonical_spec(1, "v1"), rng_for(2))
        tampered = CamouflagedInstance(
            base=ci.base,
            text=ci.text.replace(ci.modifications[0].replacement, "XXXX", 1),
            camo_applied=True,
            level=ci.level,
            version=ci.version,
            modifications=ci.modifications,
        )
        with pytest.raises(IntegrityError, match=test[0].id):
            revert(tampered)


class TestRoundTrip:
    def test_write_read_camouflaged(self, corpus, tmp_path):
        train, _ = corpus
        rows = static_training_set(train[:50], 50, 3)
        path = tmp_path / "out.jsonl"
        write_dataset(path, rows)
        back = read_camouflaged(path)
        assert [r.text for r in back] == [r.text for r in rows]
        assert [r.camo_applied for r in back] == [r.camo_applied for r in rows]
        # reverting reconstructs the ingested originals
        originals = {i.id: i.text for i in train[:50]}
        for row in back:
            assert revert(row) == originals[row.id]

    def test_transform_dataset_matches_suite_member(self, tmp_path):
        _, test = bundled_corpus(n_train=10, n_test=80)
        manifest = generate_suite(test, tmp_path, 21, source_path="t", source_checksum="x")
        rows = transform_dataset(test, canonical_spec(2, "v2"), 75, 21)
        on_disk = read_camouflaged(tmp_path / "l2.v2.p75.jsonl")
        assert [r.text for r in rows] == [r.text for r in on_disk]
