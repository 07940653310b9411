#!/usr/bin/env python3
# Copyright 2026 The vqc Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Convert a MedMNIST .npz archive (e.g. breastmnist.npz) into a QDS1 dataset.

The train and val arrays become split bytes 0 and 2, the test array becomes 1.
"""

import argparse
import struct

import numpy as np


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("npz", help="MedMNIST archive with {train,val,test}_{images,labels}")
    parser.add_argument("output", help="QDS file to write")
    args = parser.parse_args()

    archive = np.load(args.npz)
    parts = [("train", 0), ("val", 2), ("test", 1)]
    images = [archive[f"{name}_images"] for name, _ in parts]
    labels = [archive[f"{name}_labels"].reshape(-1) for name, _ in parts]
    height, width = images[0].shape[1:3]
    channels = 1 if images[0].ndim == 3 else images[0].shape[3]
    n_classes = int(max(int(l.max()) for l in labels)) + 1
    n_samples = sum(len(l) for l in labels)

    with open(args.output, "wb") as out:
        out.write(b"QDS1")
        out.write(struct.pack("<5I", n_samples, height, width, channels, n_classes))
        for (_, split), imgs, labs in zip(parts, images, labels):
            for img, lab in zip(imgs.astype(np.uint8), labs):
                out.write(bytes([int(lab)]))
                out.write(img.tobytes())
                out.write(bytes([split]))
    print(f"wrote {n_samples} samples ({height}x{width}x{channels}, {n_classes} classes) to {args.output}")


if __name__ == "__main__":
    main()
