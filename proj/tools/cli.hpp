#pragma once

#include <string>
#include <vector>

namespace levyt {

// Full command-line front end; args are argv[1:]. Returns the process exit
// status: 0 all gates pass, 1 a gate failed, 2 invalid configuration or
// usage, 3 numerical failure (message carries the replay seed).
int cli_run(const std::vector<std::string>& args);

}  // namespace levyt
