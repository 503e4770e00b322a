"""Feature frames and the SFF1 wire format."""

import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from semcom import (
    BadMagic,
    CompletionPolicy,
    EmptySelection,
    FeatureFrame,
    FrameFormatError,
    LengthMismatch,
    TruncatedFrame,
    VersionUnsupported,
    complete_features,
    decode_frame,
    encode_frame,
    encoded_length,
    read_frames,
    select_features,
    write_frames,
)


def make_frame(rng, n=32, n_selected=None, frame_id=None):
    mask = np.zeros(n, dtype=bool)
    k = n_selected if n_selected is not None else int(rng.integers(1, n + 1))
    mask[rng.choice(n, size=k, replace=False)] = True
    feats = rng.standard_normal(n).astype(np.float32).astype(np.float64)
    return FeatureFrame(feats, mask, frame_id=int(frame_id if frame_id is not None else rng.integers(0, 2**32)))


class TestFeatureFrame:
    def test_mask_length_checked(self):
        with pytest.raises(LengthMismatch):
            FeatureFrame([1.0, 2.0], [True])

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            FeatureFrame([], [])

    def test_immutable(self):
        f = FeatureFrame([1.0, 2.0], [True, False])
        with pytest.raises(ValueError):
            f.features[0] = 5.0


class TestSelectFeatures:
    def test_all_selected(self):
        f = FeatureFrame([1.0, 2.0, 3.0], [True, True, True])
        assert select_features(f) == pytest.approx([1.0, 2.0, 3.0])

    def test_single_of_many(self):
        feats = np.arange(32, dtype=float)
        mask = np.zeros(32, dtype=bool)
        mask[0] = True
        assert select_features(FeatureFrame(feats, mask)) == pytest.approx([0.0])

    def test_empty_selection_raises(self):
        f = FeatureFrame([1.0, 2.0], [False, False])
        with pytest.raises(EmptySelection):
            select_features(f)


class TestCompleteFeatures:
    def test_all_true_mask_copies_received(self):
        out = complete_features([1.0, 2.0], [True, True], CompletionPolicy("prior_mean"))
        assert out.features == pytest.approx([1.0, 2.0])

    def test_prior_mean_zero_fill(self):
        mask = [True, False, False, False, True]
        out = complete_features([9.0, 8.0], mask, CompletionPolicy("prior_mean"))
        assert out.features == pytest.approx([9.0, 0.0, 0.0, 0.0, 8.0])

    def test_prior_sample_deterministic(self):
        mask = [True, False, False, True]
        pol = CompletionPolicy("prior_sample", seed=7)
        a = complete_features([1.0, 2.0], mask, pol, frame_id=3)
        b = complete_features([1.0, 2.0], mask, pol, frame_id=3)
        assert np.array_equal(a.features, b.features)
        c = complete_features([1.0, 2.0], mask, pol, frame_id=4)
        assert not np.array_equal(a.features[1:3], c.features[1:3])

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            complete_features([1.0], [True, True], CompletionPolicy())

    def test_bad_mode(self):
        with pytest.raises(ValueError):
            CompletionPolicy("prior_median")


class TestWireFormat:
    def test_all_selected_length(self):
        f = make_frame(np.random.default_rng(1), n=32, n_selected=32)
        data = encode_frame(f)
        assert len(data) == 16 + 4 + 128 == encoded_length(32, 32)

    def test_partial_selection_length(self):
        f = make_frame(np.random.default_rng(2), n=32, n_selected=8)
        assert len(encode_frame(f)) == 16 + 4 + 32 == encoded_length(32, 8)

    def test_header_layout(self):
        f = FeatureFrame(np.zeros(9), [True] + [False] * 7 + [True], frame_id=0x01020304)
        data = encode_frame(f)
        assert data[:4] == b"SFF1"
        assert data[4] == 1  # version
        assert data[5] == 0  # flags
        assert data[6:8] == b"\x00\x00"
        assert data[8:12] == (9).to_bytes(4, "little")
        assert data[12:16] == (0x01020304).to_bytes(4, "little")
        # mask: feature 0 -> byte 0 bit 0, feature 8 -> byte 1 bit 0
        assert data[16] == 0x01
        assert data[17] == 0x01

    def test_quantized_flag(self):
        f = FeatureFrame([1.0], [True], quantized=True)
        data = encode_frame(f)
        assert data[5] == 0x01
        assert decode_frame(data).quantized

    def test_frame_id_low_32_bits(self):
        f = FeatureFrame([1.0], [True], frame_id=2**40 + 5)
        assert decode_frame(encode_frame(f)).frame_id == 5

    def test_roundtrip_random_frames(self):
        rng = np.random.default_rng(3)
        for _ in range(1000):
            f = make_frame(rng, n=int(rng.integers(1, 70)))
            data = encode_frame(f)
            g = decode_frame(data)
            assert g.frame_id == f.frame_id
            assert np.array_equal(g.selection_mask, f.selection_mask)
            assert np.array_equal(g.features[g.selection_mask], f.features[f.selection_mask])
            assert np.all(np.isnan(g.features[~g.selection_mask]))
            assert encode_frame(g) == data

    @given(
        st.integers(1, 80),
        st.integers(0, 2**32 - 1),
        st.randoms(use_true_random=False),
    )
    @settings(max_examples=200)
    def test_roundtrip_property(self, n, frame_id, pyrandom):
        rng = np.random.default_rng(pyrandom.getrandbits(63))
        f = make_frame(rng, n=n, frame_id=frame_id)
        data = encode_frame(f)
        assert len(data) == encoded_length(n, f.n_selected)
        assert encode_frame(decode_frame(data)) == data

    def test_bad_magic(self):
        f = make_frame(np.random.default_rng(4))
        data = bytearray(encode_frame(f))
        data[0] = ord("X")
        with pytest.raises(BadMagic):
            decode_frame(bytes(data))

    def test_truncated(self):
        data = encode_frame(make_frame(np.random.default_rng(5)))
        with pytest.raises(TruncatedFrame):
            decode_frame(data[:-1])
        with pytest.raises(TruncatedFrame):
            decode_frame(data[:10])

    def test_version_unsupported(self):
        data = bytearray(encode_frame(make_frame(np.random.default_rng(6))))
        data[4] = 2
        with pytest.raises(VersionUnsupported):
            decode_frame(bytes(data))

    def test_trailing_bytes_rejected(self):
        data = encode_frame(make_frame(np.random.default_rng(7)))
        with pytest.raises(FrameFormatError):
            decode_frame(data + b"\x00")


class TestStreams:
    def test_write_read_many(self):
        rng = np.random.default_rng(8)
        frames = [make_frame(rng, frame_id=i) for i in range(25)]
        buf = io.BytesIO()
        nbytes = write_frames(buf, frames)
        assert nbytes == sum(encoded_length(len(f), f.n_selected) for f in frames)
        buf.seek(0)
        loaded = list(read_frames(buf))
        assert [f.frame_id for f in loaded] == list(range(25))
        for f, g in zip(frames, loaded):
            assert np.array_equal(g.features[g.selection_mask], f.features[f.selection_mask])

    def test_truncated_stream(self):
        buf = io.BytesIO(encode_frame(make_frame(np.random.default_rng(9)))[:-2])
        with pytest.raises(TruncatedFrame):
            list(read_frames(buf))

    def test_empty_stream(self):
        assert list(read_frames(io.BytesIO(b""))) == []
