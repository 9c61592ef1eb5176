import os

from ..abstract.schema import FeatureSchema

DATA_DIR_VARIABLE = 'CDMLSTM_DATA_DIR'

KELVINS_DROPPED_COLUMNS = ['c_rcs_estimate', 't_rcs_estimate', 'F10', 'F3M',
                           'SSN', 'AP', 'mission_id', 'c_object_type']

KELVINS_SIGMA_LIMITS = {'t_sigma_r': 20.0, 'c_sigma_r': 1000.0,
                        't_sigma_t': 2000.0, 'c_sigma_t': 100000.0,
                        't_sigma_n': 10.0, 'c_sigma_n': 450.0}

KELVINS_WIDTH = 52

SIGMAS = ['sigma_r', 'sigma_t', 'sigma_n',
          'sigma_rdot', 'sigma_tdot', 'sigma_ndot']

CORRELATIONS = ['ct_r', 'cn_r', 'cn_t', 'crdot_r', 'crdot_t', 'crdot_n',
                'ctdot_r', 'ctdot_t', 'ctdot_n', 'ctdot_rdot', 'cndot_r',
                'cndot_t', 'cndot_n', 'cndot_rdot', 'cndot_tdot']


def get_feature_names(dataset_name='Kelvins'):
    """Gets the modeled feature names of the supported datasets.

    # Arguments
        dataset_name: String. Dataset name. Valid dataset names are:
            Kelvins.

    # Returns
       List of strings containing the feature names in model order.

    # Raises
        ValueError: in case of invalid dataset name
    """
    if dataset_name == 'Kelvins':
        feature_names = ['time_to_tca', 'miss_distance',
                         'relative_position_r', 'relative_position_t',
                         'relative_position_n', 'relative_velocity_r',
                         'relative_velocity_t', 'relative_velocity_n',
                         't_span', 'c_span']
        for prefix in ['t_', 'c_']:
            feature_names.extend([prefix + name for name in SIGMAS])
            feature_names.extend([prefix + name for name in CORRELATIONS])
    else:
        raise ValueError('Invalid dataset', dataset_name)
    return feature_names


def kelvins_schema():
    """Default ``FeatureSchema`` of the Kelvins collision avoidance data.

    Records with a missing value in any column that is not dropped are
    discarded, together with records whose variances exceed
    ``KELVINS_SIGMA_LIMITS``.
    """
    return FeatureSchema(get_feature_names('Kelvins'),
                         KELVINS_DROPPED_COLUMNS, KELVINS_SIGMA_LIMITS,
                         missing_check='retained',
                         expected_width=KELVINS_WIDTH)


def get_data_dir():
    """Returns ``$CDMLSTM_DATA_DIR`` or ``~/.cdmlstm/data``.
    """
    default = os.path.join(os.path.expanduser('~'), '.cdmlstm', 'data')
    return os.environ.get(DATA_DIR_VARIABLE, default)


def resolve_path(path):
    """Resolves a relative path missing from the working directory against
    the data directory.
    """
    if os.path.isabs(path) or os.path.exists(path):
        return path
    candidate = os.path.join(get_data_dir(), path)
    if os.path.exists(candidate):
        return candidate
    return path
