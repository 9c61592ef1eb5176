from setuptools import setup
from setuptools import find_packages
import cdmlstm

setup(name='cdmlstm',
      version=cdmlstm.__version__,
      description='Conjunction event forecasting with recurrent networks',
      license='MIT',
      install_requires=['numpy', 'pandas', 'tensorflow'],
      extras_require={'tests': ['pytest']},
      entry_points={'console_scripts': ['cdmlstm=cdmlstm.cli:main']},
      packages=find_packages(exclude=['tests', 'tests.*'])
      )
