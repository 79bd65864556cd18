#pragma once

#include "dilation/linalg.hpp"
#include "dilation/random.hpp"
#include "dilation/defect.hpp"
#include "dilation/certificate.hpp"
#include "dilation/block_operator.hpp"
#include "dilation/schaffer.hpp"
#include "dilation/hardy.hpp"
#include "dilation/verify.hpp"
#include "dilation/io.hpp"
