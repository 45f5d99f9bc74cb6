# Validation package
from .campaign_validator import CampaignValidator, CampaignValidationError

__all__ = ['CampaignValidator', 'CampaignValidationError']
