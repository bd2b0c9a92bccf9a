import numpy as np
import pytest

_ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(_ACCEPTANCE):
        terminalreporter.write_line(line)


@pytest.fixture
def record_criterion():
    """Record a one-line PASS/FAIL verdict shown in the terminal summary."""

    def record(number, passed, detail):
        verdict = "PASS" if passed else "FAIL"
        _ACCEPTANCE.append(f"criterion {number:>2}: {verdict}  {detail}")
        return passed

    return record


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def brute_dft2(x):
    """Direct O(N^4) DFT, independent of numpy.fft."""
    h, w = x.shape
    k1 = np.arange(h)[:, None]
    k2 = np.arange(w)[:, None]
    e1 = np.exp(-2j * np.pi * k1 * np.arange(h)[None, :] / h)
    e2 = np.exp(-2j * np.pi * k2 * np.arange(w)[None, :] / w)
    out = np.zeros((h, w), dtype=complex)
    for a in range(h):
        for b in range(w):
            out[a, b] = np.sum(x * e1[a][:, None] * e2[b][None, :])
    return out


def circular_convolve(img, kernel):
    """Direct circular convolution by summing shifted copies."""
    out = np.zeros_like(img, dtype=float)
    h, w = img.shape
    for a in range(h):
        for b in range(w):
            if kernel[a, b] != 0.0:
                out += kernel[a, b] * np.roll(img, (a, b), axis=(0, 1))
    return out
