"""End-to-end CLI checks driven through subprocess."""

import json
import os
import subprocess

import numpy as np
import pytest

import diffsr

CLI = os.environ.get("DIFFSR_CLI")

pytestmark = pytest.mark.skipif(CLI is None, reason="DIFFSR_CLI not set")


def run(*args, expect=0):
    proc = subprocess.run([CLI, *map(str, args)], capture_output=True, text=True)
    assert proc.returncode == expect, proc.stderr + proc.stdout
    return proc


def make_tone_wav(path, rate=16000, seconds=0.5, hz=440.0):
    t = np.arange(int(rate * seconds)) / rate
    x = 0.4 * np.sin(2 * np.pi * hz * t) + 0.01 * np.random.default_rng(0).standard_normal(len(t))
    diffsr.write_wav(str(path), diffsr.Waveform(x, rate))
    return str(path)


def test_degrade_eval_roundtrip(tmp_path):
    src = make_tone_wav(tmp_path / "in.wav")
    out = str(tmp_path / "low.wav")
    run("degrade", src, "--target-rate", 8000, "-o", out)
    side = json.load(open(out + ".json"))
    assert side["filter"]["kind"] == "sinc_kaiser"
    assert side["filter"]["cutoff_hz"] == 4000.0
    low = diffsr.read_wav(out)
    assert low.sample_rate == 8000

    proc = run("eval", src, src)
    assert "mean LSD 0.000" in proc.stdout


def test_sr_gaussian_prior_deterministic(tmp_path):
    rng = np.random.default_rng(4)
    x = rng.standard_normal(4096) * 0.2
    src = str(tmp_path / "in.wav")
    diffsr.write_wav(src, diffsr.Waveform(x, 16000))
    low = str(tmp_path / "low.wav")
    run("degrade", src, "--target-rate", 8000, "-o", low)

    prior = str(tmp_path / "prior.json")
    json.dump({"sample_rate": 16000, "psd": [1.0] * 33}, open(prior, "w"))
    out1 = str(tmp_path / "sr1.wav")
    out2 = str(tmp_path / "sr2.wav")
    trace = str(tmp_path / "trace.jsonl")
    run("sr", low, "--gaussian-prior", prior, "--steps", 25, "--seed", 11, "-o", out1,
        "--trace", trace)
    run("sr", low, "--gaussian-prior", prior, "--steps", 25, "--seed", 11, "-o", out2)
    assert open(out1, "rb").read() == open(out2, "rb").read()  # bitwise determinism
    lines = [json.loads(line) for line in open(trace)]
    assert len(lines) == 24
    assert all("residual" in rec for rec in lines)
    side = json.load(open(out1 + ".json"))
    assert side["steps"] == 25
    sr_out = diffsr.read_wav(out1)
    assert sr_out.sample_rate == 16000


def test_exit_codes(tmp_path):
    # unreadable input -> 2
    run("degrade", str(tmp_path / "missing.wav"), "--target-rate", 8000, expect=2)
    # eval on mismatched rates -> 2
    a = make_tone_wav(tmp_path / "a.wav", rate=16000)
    b = make_tone_wav(tmp_path / "b.wav", rate=8000)
    run("eval", a, b, expect=2)
    # stft filter with non-integer ratio -> 2
    run("degrade", a, "--target-rate", 7000, "--filter", "stft", expect=2)


def test_train_and_sample_uncond(tmp_path):
    ckpt = str(tmp_path / "m.udm")
    run("train", "--synthetic", "ar1", "--rate", 4000, "--count", 2, "--length", 4096,
        "--steps", 40, "--batch", 2, "--segment", 128, "-o", ckpt,
        "--log", str(tmp_path / "log.jsonl"))
    assert os.path.exists(ckpt)
    assert os.path.exists(ckpt + ".raw")
    log = [json.loads(line) for line in open(tmp_path / "log.jsonl")]
    assert all(set(rec) == {"step", "loss", "ema_loss"} for rec in log)

    out = str(tmp_path / "u.wav")
    run("sample-uncond", "--checkpoint", ckpt, "--length", 2000, "--steps", 10,
        "--seed", 3, "-o", out)
    w = diffsr.read_wav(out)
    assert len(w.samples) == 2000
    assert w.sample_rate == 4000


def test_batch_sr_with_jobs(tmp_path):
    inputs = []
    for i in range(3):
        w = diffsr.make_ar1(1024, 4000, 0.9, 0.2, seed=i)
        lo = diffsr.downsample(w, 2000)
        p = str(tmp_path / f"in{i}.wav")
        diffsr.write_wav(p, lo)
        inputs.append(p)
    prior = str(tmp_path / "prior.json")
    json.dump({"sample_rate": 4000, "psd": [1.0] * 17}, open(prior, "w"))
    outdir = str(tmp_path / "batch")
    run("sr", *inputs, "--gaussian-prior", prior, "--steps", 10, "--seed", 5,
        "--jobs", 2, "-o", outdir)
    outs = sorted(os.listdir(outdir))
    assert [o for o in outs if o.endswith(".sr.wav")] == [f"in{i}.sr.wav" for i in range(3)]
    # per-file rng streams: independent draws under one seed
    sides = [json.load(open(os.path.join(outdir, f"in{i}.sr.wav.json"))) for i in range(3)]
    assert sorted(s["rng_stream"] for s in sides) == [0, 1, 2]


def test_validate_oracle_quick(tmp_path):
    report = str(tmp_path / "oracle.json")
    proc = run("validate-oracle", "--quick", "--report", report)
    assert "PASS" in proc.stdout
    rep = json.load(open(report))
    assert rep["pass"] is True
