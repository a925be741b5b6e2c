"""Acceptance suite: one test per criterion, at the stated tolerances.

Each test prints a PASS line with its measured numbers (run pytest with -s
to see them) and asserts its runtime budget.
"""

import json
import time
from contextlib import contextmanager

import numpy as np

import spl
from spl.cli import main as cli_main
from spl.loss import LossConfig, TermWeights
from spl.optimize import _psnr_export
from conftest import (NATURAL_32, flat_colour, naive_profile_similarity,
                      rand_image, tinted_grey_source)


@contextmanager
def budget(seconds):
    start = time.perf_counter()
    yield
    elapsed = time.perf_counter() - start
    assert elapsed < seconds, f"runtime {elapsed:.1f}s exceeded {seconds}s budget"


def natural_fixture():
    return spl.to_symmetric(spl.load_image(NATURAL_32))


def test_a1_identity_maxima():
    with budget(1.0):
        worst = {"ps": 0.0, "gp": 0.0, "spl": 0.0}
        for seed in range(20):
            img = rand_image(seed, (3, 16, 16))
            ps = spl.profile_similarity(img, img)
            gp, _ = spl.gp_loss(img, img)
            report, _ = spl.spl_objective(img, img)
            assert abs(ps - 6.0) <= 1e-6
            assert abs(gp - 12.0) <= 1e-5
            assert abs(report.total - 36.0) <= 1e-4
            worst["ps"] = max(worst["ps"], abs(ps - 6.0))
            worst["gp"] = max(worst["gp"], abs(gp - 12.0))
            worst["spl"] = max(worst["spl"], abs(report.total - 36.0))
    print(f"PASS A1 identity maxima: worst |ps-6|={worst['ps']:.2e}, "
          f"|gp-12|={worst['gp']:.2e}, |spl-36|={worst['spl']:.2e}")


def test_a2_gradient_oracle():
    with budget(30.0):
        worst = 0.0
        for objective in spl.verify.OBJECTIVES:
            for seed in (1, 2, 3, 4, 5):
                result = spl.gradcheck(objective, seed=seed, size=(8, 8, 3))
                assert result.max_rel_error < 1e-5, (objective, seed, result)
                worst = max(worst, result.max_rel_error)
    print(f"PASS A2 gradient oracle: 5 objectives x 5 seeds, "
          f"worst max_rel_error={worst:.2e} < 1e-5")


def test_a3_equal_l1_patterns_distinguished():
    with budget(1.0):
        a = np.zeros((1, 64, 64))
        a[0, :, :32] = 1.0
        b = np.zeros((1, 64, 64))
        b[0, :, 8:40] = 1.0
        c = a.copy()
        c[0, :16, :] = 1.0 - c[0, :16, :]
        imgs = [spl.Image(x, spl.RangeTag.UNIT) for x in (a, b, c)]
        assert a.sum() == b.sum() == c.sum()  # equal white-pixel counts
        l1_ab = spl.mean_abs_diff(imgs[0], imgs[1])
        l1_ac = spl.mean_abs_diff(imgs[0], imgs[2])
        assert l1_ab == 0.25 and l1_ac == 0.25
        s_ab = spl.profile_similarity(imgs[0], imgs[1])
        s_ac = spl.profile_similarity(imgs[0], imgs[2])
        gap = abs(s_ab - s_ac)
        assert gap > 0.01
        # independent definition-level check of both similarities
        assert abs(s_ab - naive_profile_similarity(a, b)) <= 1e-12
        assert abs(s_ac - naive_profile_similarity(a, c)) <= 1e-12
    print(f"PASS A3 equal-L1 degeneracy: both L1=0.25 exactly, "
          f"profile gap={gap:.3f} > 0.01")


def test_a4_reconstruction_convergence():
    with budget(60.0):
        target = natural_fixture()
        trace = spl.reconstruct(target, spl.AdamParams(lr=2e-2, max_steps=2000),
                                seed=1)
        final_psnr = trace.records[-1]["psnr_vs_target"]
        assert final_psnr >= 30.0
        objectives = np.array([r["objective"] for r in trace.records])
        moving_avg = np.convolve(objectives, np.ones(100) / 100.0, "valid")
        # non-increasing up to saturation jitter; divergence would blow far
        # past this allowance
        worst_rise = float(np.max(np.diff(moving_avg)))
        assert worst_rise <= 1e-3
    print(f"PASS A4 reconstruction: PSNR={final_psnr:.2f} dB >= 30, "
          f"worst moving-average rise={worst_rise:.1e} <= 1e-3")


def test_a5_shape_colour_distillation():
    with budget(120.0):
        # (a) structure-only reconstruction nails gradients, misses colour
        target = natural_fixture()
        gp_only = LossConfig(weights=TermWeights(gp=1.0, cp_rgb=0.0,
                                                 cp_yuv=0.0, cp_grad_yuv=0.0))
        trace = spl.reconstruct(target, spl.AdamParams(lr=2e-2, max_steps=600),
                                cfg=gp_only, seed=3)
        gp_val, _ = spl.gp_loss(trace.final_image, target)
        assert gp_val >= 0.95 * 12.0
        mean_off = np.abs(trace.final_image.data.mean(axis=(1, 2))
                          - target.data.mean(axis=(1, 2)))
        assert np.all(mean_off > 0.1)

        # (b) colour transfer moves chrominance while holding structure
        src = tinted_grey_source()
        ref = flat_colour((0.6, -0.6, -0.6))
        run = spl.colour_transfer(src, ref,
                                  spl.AdamParams(lr=2e-3, max_steps=400))
        out = run.final_image

        def uv(img):
            return spl.rgb_to_yuv(img, spl.BT601).data[1:]

        d_out = float(np.mean(np.abs(uv(out) - uv(ref))))
        d_src = float(np.mean(np.abs(uv(src) - uv(ref))))
        assert d_out < d_src
        gp_out, _ = spl.gp_loss(out, src)
        gp_src, _ = spl.gp_loss(src, src)
        assert gp_out >= 0.9 * gp_src
    print(f"PASS A5 distillation: (a) GP={gp_val:.3f} >= 11.4 with colour off "
          f"by {mean_off.min():.2f} per channel; (b) UV dist "
          f"{d_src:.3f} -> {d_out:.3f} with GP(out,src)={gp_out:.2f} >= "
          f"{0.9 * gp_src:.2f}")


def test_a6_algebraic_invariants():
    with budget(10.0):
        rng = np.random.default_rng(0)
        for case in range(100):
            a = rand_image(case, (2, 6, 7))
            b = rand_image(case + 500, (2, 6, 7))
            # symmetry
            assert abs(spl.profile_similarity(a, b)
                       - spl.profile_similarity(b, a)) <= 1e-12
            # positive-scale invariance
            base = spl.profile_similarity(a, b)
            for s in (0.5, 2.0, 10.0):
                scaled = spl.Image(s * a.data, spl.RangeTag.SYMMETRIC)
                assert abs(spl.profile_similarity(scaled, b) - base) <= 1e-6
            # per-profile cosine bounds via the report breakdown
            rgb = rand_image(case + 1000, (3, 6, 6))
            rgb2 = rand_image(case + 1500, (3, 6, 6))
            report, _ = spl.spl_objective(rgb, rgb2)
            for table in report.per_channel_row_col.values():
                rows_cols = table.values() if isinstance(table, dict) else [table]
                for per_channel in rows_cols:
                    flat = np.asarray(per_channel).ravel()
                    assert np.all(flat >= -1 - 1e-9) and np.all(flat <= 1 + 1e-9)
            # DC invariance of the gradient-profile term
            shift = float(rng.uniform(-1, 1))
            gp_a, _ = spl.gp_loss(rgb, rgb2)
            gp_b, _ = spl.gp_loss(
                spl.Image(rgb.data + shift, spl.RangeTag.SYMMETRIC), rgb2)
            assert abs(gp_a - gp_b) <= 1e-9
            # adjoint identities: colour map and difference operator
            x = rng.normal(size=(3, 6, 6))
            g = rng.normal(size=(3, 6, 6))
            lhs = float(np.sum(spl.image.apply_colour_forward(x, spl.BT601) * g))
            rhs = float(np.sum(x * spl.image.apply_colour_adjoint(g, spl.BT601)))
            assert abs(lhs - rhs) <= 1e-12
            gx, gy = spl.diffops.gradient_arrays(x)
            fx = rng.normal(size=gx.shape)
            fy = rng.normal(size=gy.shape)
            lhs = float(np.sum(gx * fx) + np.sum(gy * fy))
            rhs = float(np.sum(
                x * spl.diffops.gradient_adjoint_arrays(fx, fy, x.shape)))
            assert abs(lhs - rhs) <= 1e-12
    print("PASS A6 algebraic invariants: symmetry, scale invariance, bounds, "
          "DC invariance, adjoints over 100 cases")


def test_a7_metrics_and_cli_sanity(tmp_path, capsys):
    with budget(5.0):
        rng = np.random.default_rng(1)
        base = spl.Image(rng.uniform(0.0, 0.9, (3, 16, 16)), spl.RangeTag.UNIT)
        offset = spl.Image(base.data + 0.1, spl.RangeTag.UNIT)
        psnr_offset = spl.psnr(base, offset)
        assert abs(psnr_offset - 20.0) <= 1e-9
        assert spl.ssim(base, base) == 1.0

        photo = tmp_path / "photo.png"
        spl.save_image(base, photo)
        code = cli_main(["compare", str(photo), str(photo)])
        out = capsys.readouterr().out
        assert code == 0
        assert abs(json.loads(out)["loss"]["total"] - 36.0) <= 1e-4

        traces = []
        for name in ("r1.png", "r2.png"):
            out_png = tmp_path / name
            assert cli_main(["reconstruct", str(photo), str(out_png),
                             "--steps", "80", "--seed", "5"]) == 0
            capsys.readouterr()
            traces.append((tmp_path / (name + ".trace.jsonl")).read_bytes())
        assert traces[0] == traces[1]
    print(f"PASS A7 metrics & CLI: offset PSNR={psnr_offset:.12f} dB, "
          "ssim(x,x)=1, compare total=36, byte-identical seeded traces")
