#pragma once

#define BERGMAN_VERSION "0.1.0"
