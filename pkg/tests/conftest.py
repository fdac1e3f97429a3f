import pytest

from cushlepor import Corpus, SegmentRecord


@pytest.fixture
def tiny_corpus() -> Corpus:
    return Corpus([
        SegmentRecord("seg1", "sysA", "the cat sat on the mat", "the cat sat on the mat",
                      gold={"psqm": 6.0}),
        SegmentRecord("seg2", "sysA", "a c b", "a b c", gold={"psqm": 4.0}),
        SegmentRecord("seg3", "sysA", "completely different words", "the quick brown fox",
                      gold={"psqm": 0.5}),
        SegmentRecord("seg1", "sysB", "the cat sat on a mat", "the cat sat on the mat",
                      gold={"psqm": 5.0}),
    ])


def write_tsv(path, rows, header=("seg_id", "system_id", "hypothesis", "reference")):
    lines = ["\t".join(header)]
    lines += ["\t".join(str(v) for v in row) for row in rows]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


@pytest.fixture
def identity_tsv(tmp_path):
    rows = [
        ("s1", "sysA", "the comet did strike", "the comet did strike"),
        ("s2", "sysA", "hello , world .", "hello , world ."),
        ("s3", "sysB", "one two three", "one two three"),
    ]
    return write_tsv(tmp_path / "identity.tsv", rows)
