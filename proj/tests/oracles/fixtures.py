# Copyright 2026 The SSN-CPU Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Independent NumPy reference computations for the frozen fixture values in
the C++ unit tests. Run with `python3 tests/oracles/fixtures.py`; each block
prints the numbers that the corresponding test asserts."""

import numpy as np

np.set_printoptions(precision=17)

# ---------------------------------------------------------------- color ----
M = np.array([[0.4124564, 0.3575761, 0.1804375],
              [0.2126729, 0.7151522, 0.0721750],
              [0.0193339, 0.1191920, 0.9503041]])
WHITE = M.sum(axis=1)

def srgb_to_lab(rgb):
    c = np.asarray(rgb, dtype=float) / 255.0
    lin = np.where(c <= 0.04045, c / 12.92, ((c + 0.055) / 1.055) ** 2.4)
    xyz = M @ lin / WHITE
    d = 6 / 29
    f = np.where(xyz > d ** 3, np.cbrt(xyz), xyz / (3 * d * d) + 4 / 29)
    return np.array([116 * f[1] - 16, 500 * (f[0] - f[1]), 200 * (f[1] - f[2])])

print("lab red", srgb_to_lab([255, 0, 0]))
try:
    from skimage.color import rgb2lab
    print("skimage red", rgb2lab(np.array([[[1.0, 0, 0]]]))[0, 0])
except ImportError:
    pass

# 2x2 image, gamma_pos = 0.5, gamma_color = 0.26
pix = [(0, 0, 0), (255, 255, 255), (128, 64, 32), (10, 200, 90)]
rows = []
for p, rgb in enumerate(pix):
    x, y = p % 2, p // 2
    L, a, b = srgb_to_lab(rgb)
    if rgb == (0, 0, 0):
        L = a = b = 0.0
    rows.append([0.5 * x, 0.5 * y, 0.26 * L * 255 / 100, 0.26 * (a + 128), 0.26 * (b + 128)])
print("features 2x2", np.array(rows))

# ----------------------------------------------------------------- grid ----
nw, nh = 7, 5
mw = int(round(np.sqrt(6 * nw / nh)))
mh = int(round(6 / mw))
owner = [[(y * mh // nh) * mw + (x * mw // nw) for x in range(nw)] for y in range(nh)]
print("grid 7x5", mw, mh, owner)

# 4x4 image, 2x2 grid, F_p = (p, p^2, sin p, 1, -p)
F = np.array([[p, p * p, np.sin(p), 1.0, -p] for p in range(16)])
own = np.array([(y // 2) * 2 + (x // 2) for y in range(4) for x in range(4)])
print("init centers", np.array([F[own == i].mean(axis=0) for i in range(4)]))

# ---------------------------------------------------- centers and maps ----
# 3x1 image, grid 2x1: pixel owners 0,0,1; candidates {0,1} for all pixels.
Q = np.array([[0.7, 0.3], [0.2, 0.8], [0.1, 0.9]])
F3 = np.array([[1.0, 0, 0, 0, 0], [2.0, 1, 0, 0, 0], [4.0, 0, 2, 0, 0]])
Z = Q.sum(axis=0)
print("update centers", (Q.T @ F3) / np.maximum(Z, 1e-8)[:, None])

# 4 pixels in a 4x1 image, grid 2x1 (owners 0,0,1,1), all pixels see both cells
Q4 = np.array([[0.9, 0.1], [0.6, 0.4], [0.3, 0.7], [0.05, 0.95]])
R4 = np.array([[1.0, 0], [1.0, 0], [0, 1.0], [0, 1.0]])
Qhat = Q4 / np.maximum(Q4.sum(axis=0), 1e-8)
Qtil = Q4 / Q4.sum(axis=1, keepdims=True)
Rb = Qhat.T @ R4
Rs = Qtil @ Rb
print("p2s", Rb)
print("s2p", Rs)
lab = R4.argmax(axis=1)
print("recon CE", -np.mean(np.log(Rs[np.arange(4), lab])))
flow = np.array([[1.0, 2.0], [1.5, 2.0], [-1.0, 0.5], [-1.0, 0.0]])
print("recon L1", np.mean(np.abs(flow - Qtil @ (Qhat.T @ flow)).sum(axis=1)))

# compactness loss on a 2x2 image, grid 2x1 -> owners (0,1,0,1), all see both
Q22 = np.array([[0.8, 0.2], [0.3, 0.7], [0.6, 0.4], [0.1, 0.9]])
Ixy = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
H = Q22.argmax(axis=1)
Sxy = (Q22 / np.maximum(Q22.sum(axis=0), 1e-8)).T @ Ixy
print("compact", np.mean(((Ixy - Sxy[H]) ** 2).sum(axis=1)))

# --------------------------------------------------------------- adam -----
g, lr, b1, b2, eps = 0.5, 1e-4, 0.9, 0.999, 1e-8
m = (1 - b1) * g
v = (1 - b2) * g * g
print("adam step1", -lr * (m / (1 - b1)) / (np.sqrt(v / (1 - b2)) + eps))

# ------------------------------------------------------------ metrics -----
Hm = np.zeros((8, 8), int); Hm[:, 4:] = 1
Gm = np.zeros((8, 8), int); Gm[:, 5:] = 1

def boundary(lm):
    h, w = lm.shape
    b = np.zeros_like(lm, bool)
    for y in range(h):
        for x in range(w):
            for dy, dx in ((0, 1), (0, -1), (1, 0), (-1, 0)):
                yy, xx = y + dy, x + dx
                if 0 <= yy < h and 0 <= xx < w and lm[yy, xx] != lm[y, x]:
                    b[y, x] = True
    return b

def matched(a, b, r):
    ys, xs = np.nonzero(a)
    hit = 0
    for y, x in zip(ys, xs):
        hit += b[max(0, y - r):y + r + 1, max(0, x - r):x + r + 1].any()
    return hit / max(len(ys), 1) if len(ys) else 0.0

for r in (0, 1):
    bh, bg = boundary(Hm), boundary(Gm)
    print("boundary r=%d" % r, "bp", matched(bh, bg, r), "br", matched(bg, bh, r))

def co(lm):
    h, w = lm.shape
    total = 0.0
    for l in np.unique(lm):
        mask = lm == l
        area = mask.sum()
        pad = np.pad(mask, 1)
        perim = sum((pad[1:-1, 1:-1] & ~np.roll(pad, s, axis=ax)[1:-1, 1:-1]).sum()
                    for ax, s in ((0, 1), (0, -1), (1, 1), (1, -1)))
        total += area / lm.size * min(1.0, 4 * np.pi * area / perim ** 2)
    return total

print("co two-segment 8x8 (cols 0-2 | 3-7)", co(np.where(np.arange(8)[None, :] < 3, 0, 1) * np.ones((8, 1), int)))

# segmented flow: 4x4, H splits columns {0,1} | {2,3}; flow is (1,0) on
# columns 0-2 and (-1,2) on column 3.
Hf = np.array([[0, 0, 1, 1]] * 4).ravel()
fl = np.array([[1.0, 0.0] if x < 3 else [-1.0, 2.0] for y in range(4) for x in range(4)])
epe = 0.0
for p in range(16):
    mean = fl[Hf == Hf[p]].mean(axis=0)
    epe += np.linalg.norm(fl[p] - mean)
print("epe", epe / 16)
