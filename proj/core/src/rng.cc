// Copyright 2026 The cvswitch Authors
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

#include "cvswitch/rng.h"

using namespace cvswitch;

Rng Rng::split(uint64_t stream) const {
    // Two rounds so that nearby stream ids under nearby keys do not collide.
    uint64_t k = mix(key_ ^ mix(stream + 0x3c6ef372fe94f82bULL));
    return Rng(FromKey{}, mix(k + kGamma));
}
