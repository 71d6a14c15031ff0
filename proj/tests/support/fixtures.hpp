// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <fstream>
#include <sstream>
#include <string>

namespace fixture {

inline std::string DataPath(const std::string& name) { return std::string(DBP_DATA_DIR) + "/" + name; }

inline std::string ReadData(const std::string& name) {
  std::ifstream in(DataPath(name), std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Reservoir R1 feeding a square loop J1-J2-J3-J4 with demands on J2..J4.
inline const char* kOneLoop = R"([TITLE]
one loop

[JUNCTIONS]
J1  50  0
J2  45  4.0
J3  44  6.5
J4  46  3.0

[RESERVOIRS]
R1  100

[PIPES]
P1  R1  J1  500  250  120
P2  J1  J2  400  150  110
P3  J2  J3  300  100  100
P4  J1  J4  350  150  130
P5  J4  J3  450  125  120

[OPTIONS]
Units LPS
Headloss H-W
)";

}  // namespace fixture
