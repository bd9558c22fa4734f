#pragma once

#define SPECGAME_VERSION "0.1.0"
