/* Copyright 2026 The DsDs Tagger Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef DSDS_PIPELINE_CLI_H_
#define DSDS_PIPELINE_CLI_H_

#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace dsds::pipeline {

// Runs one subcommand. `args` excludes the program name. Returns the exit
// code; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            const std::map<std::string, std::string>& env);

// "a,b\n1,2\n" -> [{"a":"1","b":"2"}] with numeric cells as numbers.
std::string csv_to_json(const std::string& csv);

}  // namespace dsds::pipeline

#endif  // DSDS_PIPELINE_CLI_H_
