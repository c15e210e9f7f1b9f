#pragma once

#include "dermfuzz/anfis/model.hpp"
#include "dermfuzz/anfis/serialize.hpp"
#include "dermfuzz/anfis/trainers.hpp"
#include "dermfuzz/anfis/training.hpp"
#include "dermfuzz/evaluation/experiment.hpp"
#include "dermfuzz/evaluation/metrics.hpp"
#include "dermfuzz/evaluation/split.hpp"
#include "dermfuzz/features/color.hpp"
#include "dermfuzz/features/feature_vector.hpp"
#include "dermfuzz/features/geometry.hpp"
#include "dermfuzz/features/shape.hpp"
#include "dermfuzz/imaging/filters.hpp"
#include "dermfuzz/imaging/io.hpp"
#include "dermfuzz/optimize/aco.hpp"
#include "dermfuzz/optimize/ica.hpp"
#include "dermfuzz/optimize/objective.hpp"
#include "dermfuzz/pipeline/commands.hpp"
#include "dermfuzz/pipeline/config.hpp"
#include "dermfuzz/pipeline/manifest.hpp"
#include "dermfuzz/pipeline/synthetic.hpp"
#include "dermfuzz/segmentation/kmeans.hpp"
#include "dermfuzz/segmentation/lesion_mask.hpp"
#include "dermfuzz/segmentation/mask.hpp"
#include "dermfuzz/segmentation/threshold.hpp"
