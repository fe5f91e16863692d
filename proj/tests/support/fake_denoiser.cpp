// Copyright 2026 The pano360 Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Stand-in external denoiser: halves the request latent.

#include <cstdio>

#include "pano/error.hpp"
#include "pano/fusion.hpp"

int main(int argc, char** argv) {
  if (argc != 3) {
    std::fprintf(stderr, "usage: fake_denoiser <request.json> <response.json>\n");
    return 2;
  }
  try {
    pano::LatentBlock x = pano::read_latent(argv[1]);
    for (double& v : x.values()) v *= 0.5;
    pano::write_latent(argv[2], x);
  } catch (const pano::Error& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 3;
  }
  return 0;
}
