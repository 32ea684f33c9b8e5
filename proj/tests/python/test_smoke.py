import os

import pytest

import morphoforge as mf

DATA = os.environ.get("MORPHOFORGE_DATA", "data")
LEXICON = os.path.join(DATA, "lexicon", "morpho_lexicon.dict")
MODELS = os.path.join(DATA, "models")


@pytest.fixture(scope="session")
def phonologizer():
    return mf.Phonologizer(LEXICON)


def test_encode_apply_round_trip():
    labels = mf.encode_labels("brad#angelina", "brangelina")
    assert set(labels) <= {"C", "D"}
    assert mf.apply_labels("brad#angelina", labels) == "brangelina"


def test_encode_rejects_non_derivable():
    with pytest.raises(mf.MorphoforgeError):
        mf.encode_labels("ab#cd", "abx")


def test_levenshtein():
    assert mf.levenshtein("kitten", "sitting") == 3
    assert mf.levenshtein("same", "same") == 0


def test_phonologizer(phonologizer):
    assert phonologizer.pronounce("captain") == "K AE P T AH N"
    assert phonologizer.spell("K AE P T AH N") == "captain"
    assert phonologizer.mir("flip", "flip") == pytest.approx(1.0)
    assert phonologizer.mir("flip", "flop") > phonologizer.mir("flip", "flsp")
    assert phonologizer.syllables("captain") == 2


def test_blend_bundle():
    bundle = mf.BlendBundle.load(os.path.join(MODELS, "blend_bundle.json"))
    assert bundle.predict("brad#angelina") == "brangelina"
    cands = bundle.candidates("brad#angelina", k=5)
    assert cands[0][0] == "brangelina"
    assert all(a >= b for (_, a), (_, b) in zip(cands, cands[1:]))


def test_clip_model(phonologizer):
    model = mf.ClipModel.load(os.path.join(MODELS, "clip_model.json"))
    assert model.predict(phonologizer, "kid video", seed=1) == "kidvid"
    one = model.predict(phonologizer, "laboratory", mode="Phone1Syl", seed=4)
    assert phonologizer.syllables(one) == 1
    graph = model.predict(phonologizer, "telephone", mode="Graph", seed=2)
    assert "telephone".startswith(graph) or "telephone".endswith(graph)


def test_redup_model():
    model = mf.RedupModel.load(os.path.join(MODELS, "redup_model.json"))
    word, kind = model.generate("flip", allow_dup=False, seed=9)
    assert kind in {"VowelEx", "ConEx"}
    assert word != "flip" and len(word) == 4
    again, _ = model.generate("flip", allow_dup=False, seed=9)
    assert again == word
