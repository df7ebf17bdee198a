#pragma once

#define RLLINK_VERSION "0.1.0"
